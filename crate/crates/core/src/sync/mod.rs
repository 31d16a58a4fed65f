//! Autocorrelation timing metrics and the two frame detectors.
//!
//! Both detectors run on the same [`Correlator`]. Schmidl&Cox uses
//! `|G(n)/M(n)|²`; NIRS first subtracts the interference estimate
//! `Q(n)²/|Q(n)|` from `G(n)`. The estimate works because a constant-envelope
//! tone contributes `(N/2)σ²e^{jπf}` to G and `(N/2)σ²e^{jπf/2}` to Q, so
//! doubling the argument of Q reproduces the tone's share of G exactly.
//!
//! Metric indices are sample indices n relative to the signal's origin.

mod correlator;
mod detect;
mod ops;

pub use correlator::{Correlator, CorrelatorState};
pub use detect::{detect, synchronize, Detector, SyncResult, TimingRule};
pub use ops::{count_report, OpCounters, OpsPerSample};

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ofdm::TimeSignal;

/// G - Q²/|Q|, the NIRS metric numerator. Returns `g` when `q == 0`.
pub fn g_nirs(g: Complex64, q: Complex64) -> Complex64 {
    let modulus = q.norm();
    if modulus == 0.0 {
        g
    } else {
        g - q * q / modulus
    }
}

/// Which metrics a trace computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metrics {
    Sc,
    Nirs,
    Both,
}

impl Metrics {
    fn sc(self) -> bool {
        matches!(self, Metrics::Sc | Metrics::Both)
    }

    fn nirs(self) -> bool {
        matches!(self, Metrics::Nirs | Metrics::Both)
    }
}

impl From<Detector> for Metrics {
    fn from(d: Detector) -> Self {
        match d {
            Detector::SchmidlCox => Metrics::Sc,
            Detector::Nirs => Metrics::Nirs,
        }
    }
}

/// Metric values at one index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricRecord {
    pub n: isize,
    pub g: Complex64,
    pub m: f64,
    pub q: Option<Complex64>,
    pub g_nirs: Option<Complex64>,
    pub metric_sc: Option<f64>,
    pub metric_nirs: Option<f64>,
}

/// Per-index metric values over a contiguous search window.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricTrace {
    pub records: Vec<MetricRecord>,
}

impl MetricTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn first_index(&self) -> Option<isize> {
        self.records.first().map(|r| r.n)
    }

    pub fn record_at(&self, n: isize) -> Option<&MetricRecord> {
        let first = self.first_index()?;
        usize::try_from(n - first).ok().and_then(|i| self.records.get(i))
    }

    /// Timing metric of `detector` at every index, if the trace carries it.
    pub fn metric(&self, detector: Detector) -> Option<Vec<f64>> {
        self.records
            .iter()
            .map(|r| match detector {
                Detector::SchmidlCox => r.metric_sc,
                Detector::Nirs => r.metric_nirs,
            })
            .collect()
    }

    /// CSV with columns `n, re_g, im_g, m, re_q, im_q, re_g_nirs, im_g_nirs,
    /// metric_sc, metric_nirs`; metrics not computed are left empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "n", "re_g", "im_g", "m", "re_q", "im_q", "re_g_nirs", "im_g_nirs", "metric_sc", "metric_nirs",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.n.to_string(),
                r.g.re.to_string(),
                r.g.im.to_string(),
                r.m.to_string(),
                opt(r.q.map(|q| q.re)),
                opt(r.q.map(|q| q.im)),
                opt(r.g_nirs.map(|g| g.re)),
                opt(r.g_nirs.map(|g| g.im)),
                opt(r.metric_sc),
                opt(r.metric_nirs),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs the streaming correlator over every index n whose samples
/// `r(n) .. r(n+N-1)` lie inside the buffer.
///
/// Returns the trace and the correlator with its counters; the first
/// index is the (uncounted) direct initialization.
pub fn metric_trace(r: &TimeSignal, n_fft: usize, metrics: Metrics) -> Result<(MetricTrace, Correlator)> {
    if r.len() < n_fft {
        return Err(Error::OutOfRange {
            start: r.first_index(),
            end: r.first_index() + n_fft as isize,
            lo: r.first_index(),
            hi: r.end_index(),
        });
    }
    let mut correlator = Correlator::new(n_fft, metrics.nirs(), &r.samples[..n_fft])?;
    let mut records = Vec::with_capacity(r.len() - n_fft + 1);
    let first = r.first_index();

    let record = |n: isize, state: CorrelatorState, ops: Option<&mut OpCounters>| {
        let mut scratch = OpCounters::default();
        let ops = ops.unwrap_or(&mut scratch);
        let m = state.m.max(0.0);
        let (q, g_nirs, metric_nirs) = if metrics.nirs() {
            let num = ops.nirs_numerator(state.g, state.q);
            (Some(state.q), Some(num), Some(ops.metric(num, m)))
        } else {
            (None, None, None)
        };
        let metric_sc = metrics.sc().then(|| ops.metric(state.g, m));
        MetricRecord {
            n,
            g: state.g,
            m,
            q,
            g_nirs,
            metric_sc,
            metric_nirs,
        }
    };

    records.push(record(first, correlator.state(), None));
    for (i, sample) in r.samples[n_fft..].iter().enumerate() {
        let state = correlator.push(*sample);
        records.push(record(first + 1 + i as isize, state, Some(correlator.ops_mut())));
    }
    Ok((MetricTrace { records }, correlator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pure_tone_sums() {
        let n_fft = 256;
        let f = 24.5;
        let tone = TimeSignal::new(
            (0..1000).map(|n| Complex64::from_polar(1.0, 2.0 * PI * f * n as f64 / 256.0)).collect(),
            0,
        );
        let (trace, _) = metric_trace(&tone, n_fft, Metrics::Both).unwrap();
        for r in &trace.records {
            assert!((r.g - Complex64::new(0.0, 128.0)).norm() < 1e-9);
            assert!((r.q.unwrap() - Complex64::from_polar(128.0, 0.25 * PI)).norm() < 1e-9);
            assert!(r.g_nirs.unwrap().norm() < 1e-9);
        }
    }

    #[test]
    fn g_nirs_cases() {
        let g = Complex64::new(0.0, 128.0);
        let q = Complex64::from_polar(128.0, 0.25 * PI);
        assert!(g_nirs(g, q).norm() < 1e-12);
        let g = Complex64::new(5.0, 2.0);
        assert_eq!(g_nirs(g, Complex64::default()), g);
    }

    #[test]
    fn short_signal_is_out_of_range() {
        let r = TimeSignal::new(vec![Complex64::new(1.0, 0.0); 100], 0);
        assert!(matches!(metric_trace(&r, 256, Metrics::Sc), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn trace_indices_follow_origin() {
        let r = TimeSignal::new(vec![Complex64::new(1.0, 0.0); 300], 20);
        let (trace, c) = metric_trace(&r, 256, Metrics::Sc).unwrap();
        assert_eq!(trace.len(), 45);
        assert_eq!(trace.first_index(), Some(-20));
        assert_eq!(trace.records.last().unwrap().n, 24);
        assert_eq!(c.samples_pushed(), 44);
        assert!(trace.records[0].q.is_none());
        assert!(trace.record_at(0).is_some() && trace.record_at(25).is_none());
    }

    #[test]
    fn csv_header_and_rows() {
        let r = TimeSignal::new(vec![Complex64::new(1.0, 0.0); 258], 0);
        let (trace, _) = metric_trace(&r, 256, Metrics::Sc).unwrap();
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,re_g,im_g,m,re_q,im_q,re_g_nirs,im_g_nirs,metric_sc,metric_nirs");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "0,128,0,128,,,,,1,");
    }
}
