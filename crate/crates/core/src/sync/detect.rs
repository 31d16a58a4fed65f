use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::{metric_trace, MetricTrace, OpCounters};
use crate::error::{invalid, Error, Result};
use crate::ofdm::TimeSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Detector {
    SchmidlCox,
    Nirs,
}

impl Detector {
    pub const ALL: [Detector; 2] = [Detector::SchmidlCox, Detector::Nirs];

    pub fn name(&self) -> &'static str {
        match self {
            Detector::SchmidlCox => "sc",
            Detector::Nirs => "nirs",
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sc" => Ok(Detector::SchmidlCox),
            "nirs" => Ok(Detector::Nirs),
            other => Err(invalid(format!("unknown algorithm '{other}' (expected sc or nirs)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimingRule {
    /// Index of the metric maximum (earliest on ties).
    #[default]
    Argmax,
    /// Midpoint between the outermost indices of the contiguous run, around
    /// the global maximum, whose metric is at least 90% of that maximum.
    Midpoint90,
}

impl FromStr for TimingRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "argmax" => Ok(TimingRule::Argmax),
            "midpoint90" => Ok(TimingRule::Midpoint90),
            other => Err(invalid(format!(
                "unknown timing rule '{other}' (expected argmax or midpoint90)"
            ))),
        }
    }
}

/// Frame start and CFO decisions of one detector run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncResult {
    /// Detected start, as an index relative to the signal origin.
    pub n_hat: isize,
    /// CFO estimate in subcarrier spacings, in (-1, 1].
    pub nu_hat: f64,
    pub peak_value: f64,
    pub ops: OpCounters,
}

pub fn detect(trace: &MetricTrace, detector: Detector, rule: TimingRule) -> Result<SyncResult> {
    if trace.is_empty() {
        return Err(invalid("empty search window"));
    }
    let metric = trace
        .metric(detector)
        .ok_or_else(|| invalid(format!("trace does not carry the {detector} metric")))?;
    if trace.records.iter().all(|r| r.m == 0.0) {
        return Err(Error::NoSignal);
    }

    let (peak_pos, peak) = metric
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    let pos = match rule {
        TimingRule::Argmax => peak_pos,
        TimingRule::Midpoint90 => {
            let threshold = 0.9 * peak;
            let mut lo = peak_pos;
            while lo > 0 && metric[lo - 1] >= threshold {
                lo -= 1;
            }
            let mut hi = peak_pos;
            while hi + 1 < metric.len() && metric[hi + 1] >= threshold {
                hi += 1;
            }
            (lo + hi) / 2
        }
    };

    let record = &trace.records[pos];
    let numerator = match detector {
        Detector::SchmidlCox => record.g,
        Detector::Nirs => record.g_nirs.expect("checked above"),
    };
    Ok(SyncResult {
        n_hat: record.n,
        nu_hat: numerator.arg() / PI,
        peak_value: peak,
        ops: OpCounters::default(),
    })
}

/// Streams `r` through a single-detector correlator and decides. The
/// returned counters cover the iterative part of the run.
pub fn synchronize(r: &TimeSignal, n_fft: usize, detector: Detector, rule: TimingRule) -> Result<SyncResult> {
    let (trace, correlator) = metric_trace(r, n_fft, detector.into())?;
    let mut result = detect(&trace, detector, rule)?;
    result.ops = correlator.ops();
    Ok(result)
}
