//! Trial scoring: sync-error classification, preamble BER with
//! perfect-channel zero forcing, and mergeable aggregate statistics.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::impairments::ChannelRealization;
use crate::ofdm::{demap_qpsk, FrameSpec, Preamble, TimeSignal, Transformer};
use crate::sync::SyncResult;

/// Ground truth of one trial; the frame origin is index 0 by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truth {
    pub origin: isize,
    pub cfo_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// n̂ − origin, in samples.
    pub timing_error: isize,
    /// ν̂ − ν, in subcarrier spacings.
    pub cfo_error: f64,
    pub is_sync_error: bool,
    pub bit_errors: u64,
    pub bits_total: u64,
}

/// A trial fails when the timing error exceeds the cyclic prefix or the
/// CFO error exceeds half a subcarrier. Both comparisons are strict.
pub fn is_sync_error(timing_error: isize, cfo_error: f64, n_cp: usize) -> bool {
    timing_error.unsigned_abs() > n_cp || cfo_error.abs() > 0.5
}

pub fn classify(result: &SyncResult, truth: Truth, n_cp: usize) -> TrialOutcome {
    let timing_error = result.n_hat - truth.origin;
    let cfo_error = result.nu_hat - truth.cfo_norm;
    TrialOutcome {
        timing_error,
        cfo_error,
        is_sync_error: is_sync_error(timing_error, cfo_error, n_cp),
        bit_errors: 0,
        bits_total: 0,
    }
}

impl TrialOutcome {
    pub fn with_bits(mut self, count: &BitCount) -> Self {
        self.bit_errors = count.bit_errors;
        self.bits_total = count.bits_total;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BitCount {
    pub bit_errors: u64,
    pub bits_total: u64,
    /// Preamble subcarriers left out because the channel nulls them.
    pub skipped_bins: Vec<i32>,
}

/// Demodulates the preamble with the receiver's own estimates and the true
/// channel.
///
/// The CFO ramp e^{-j2πν̂n/N} is removed, the DFT window starts at n̂, and
/// each preamble bin is divided by H_k·e^{j2πkn̂/N}: the channel response
/// plus the linear phase a timing offset inside the CP leaves behind.
pub fn ber_preamble(
    received: &TimeSignal,
    sync: &SyncResult,
    channel: &ChannelRealization,
    preamble: &Preamble,
    spec: &FrameSpec,
) -> Result<BitCount> {
    let n = spec.n_fft();
    let window = received.window(sync.n_hat, n)?;
    let step = -2.0 * PI * sync.nu_hat / n as f64;
    let body: Vec<Complex64> = window
        .iter()
        .enumerate()
        .map(|(m, s)| s * Complex64::from_polar(1.0, step * (sync.n_hat + m as isize) as f64))
        .collect();
    let bins = Transformer::new(n).analyze(&body);

    let subcarriers = Preamble::subcarriers(&spec.map);
    if preamble.bits.len() != 2 * subcarriers.len() {
        return Err(invalid(format!(
            "preamble carries {} bits, map has {} preamble subcarriers",
            preamble.bits.len(),
            subcarriers.len()
        )));
    }
    let mut count = BitCount::default();
    for (&k, sent) in subcarriers.iter().zip(preamble.bits.chunks_exact(2)) {
        let h = channel.response_at(k, n);
        if h.norm() < ZF_FLOOR {
            count.skipped_bins.push(k);
            continue;
        }
        let timing = Complex64::from_polar(1.0, 2.0 * PI * k as f64 * sync.n_hat as f64 / n as f64);
        let equalized = bins[spec.map.position(k)] / (h * timing);
        let decided = demap_qpsk(&[equalized]);
        count.bit_errors += decided.iter().zip(sent).filter(|(a, b)| a != b).count() as u64;
        count.bits_total += 2;
    }
    Ok(count)
}

/// Channel magnitude below which a bin counts as nulled.
pub const ZF_FLOOR: f64 = 1e-12;

/// Aggregate statistics of one simulation cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n_trials: u64,
    pub p_sync_error: f64,
    /// Half-width of the normal-approximation 95% binomial interval.
    pub ci_halfwidth: f64,
    /// Squared samples, errored trials included.
    pub mse_time: f64,
    /// Squared subcarrier spacings, errored trials included.
    pub mse_freq: f64,
    /// NaN when no bits were scored.
    pub ber: f64,
}

/// Running sums over outcomes; merging two is associative.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Aggregator {
    trials: u64,
    errors: u64,
    timing_sq: f64,
    cfo_sq: f64,
    bit_errors: u64,
    bits_total: u64,
}

impl Aggregator {
    pub fn push(&mut self, o: &TrialOutcome) {
        self.trials += 1;
        self.errors += u64::from(o.is_sync_error);
        self.timing_sq += (o.timing_error as f64).powi(2);
        self.cfo_sq += o.cfo_error * o.cfo_error;
        self.bit_errors += o.bit_errors;
        self.bits_total += o.bits_total;
    }

    pub fn merge(&mut self, other: &Aggregator) {
        self.trials += other.trials;
        self.errors += other.errors;
        self.timing_sq += other.timing_sq;
        self.cfo_sq += other.cfo_sq;
        self.bit_errors += other.bit_errors;
        self.bits_total += other.bits_total;
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn summary(&self) -> Result<Summary> {
        if self.trials == 0 {
            return Err(invalid("no outcomes to aggregate"));
        }
        let n = self.trials as f64;
        let p = self.errors as f64 / n;
        Ok(Summary {
            n_trials: self.trials,
            p_sync_error: p,
            ci_halfwidth: 1.96 * (p * (1.0 - p) / n).sqrt(),
            mse_time: self.timing_sq / n,
            mse_freq: self.cfo_sq / n,
            ber: if self.bits_total == 0 {
                f64::NAN
            } else {
                self.bit_errors as f64 / self.bits_total as f64
            },
        })
    }
}

pub fn aggregate<'a>(outcomes: impl IntoIterator<Item = &'a TrialOutcome>) -> Result<Summary> {
    let mut acc = Aggregator::default();
    outcomes.into_iter().for_each(|o| acc.push(o));
    acc.summary()
}
