//! Analytic oracle for the interference cross-terms.
//!
//! With r(n) = y(n)e^{j2πνn/N} + s·e^{j(2πfn/N + φ)}, the half-lag sum G(n)
//! splits into a signal part, a tone part, and cross-terms that depend on y
//! only through the rotated half-window DFT
//!
//! ```text
//! b(n) = Σ_{m<N/2} y(n+m) e^{-j2π(f-ν)(n+m)/N}
//! ```
//!
//! Here b(n) is evaluated by direct summation, in closed form for a single
//! CP-extended symbol, and through a multipath channel. The module also
//! decomposes G and Q into their parts and estimates how much power the
//! neglected cross-term carries.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::impairments::{
    apply_multipath, calibrate_and_mix, draw_channel_cost207tu, ChannelRealization, MixSpec,
};
use crate::ofdm::{random_frame, FrameSpec, SubcarrierMap, TimeSignal};
use crate::seed::trial_rng;

/// b(n) by direct summation over `y(n) .. y(n+N/2-1)`.
pub fn b_direct(y: &TimeSignal, f: f64, nu: f64, n: isize, n_fft: usize) -> Result<Complex64> {
    let window = y.window(n, n_fft / 2)?;
    let step = -2.0 * PI * (f - nu) / n_fft as f64;
    Ok(window
        .iter()
        .enumerate()
        .map(|(m, s)| s * Complex64::from_polar(1.0, step * (n + m as isize) as f64))
        .sum())
}

/// Which part of symbol 0 the half window at n covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowCase {
    /// Window starts before the cyclic prefix.
    Leading,
    /// Window lies inside the CP-extended symbol.
    Inside,
    /// Window runs past the end of the symbol.
    Trailing,
}

impl WindowCase {
    pub fn of(n: isize, n_fft: usize, n_cp: usize) -> Option<Self> {
        let (n_fft, n_cp) = (n_fft as isize, n_cp as isize);
        let half = n_fft / 2;
        if (-half - n_cp + 1..=-n_cp - 1).contains(&n) {
            Some(WindowCase::Leading)
        } else if (-n_cp..=half).contains(&n) {
            Some(WindowCase::Inside)
        } else if (half + 1..n_fft).contains(&n) {
            Some(WindowCase::Trailing)
        } else {
            None
        }
    }

    /// First and last sample index t summed over for window start n.
    fn span(self, n: isize, n_fft: usize, n_cp: usize) -> (isize, isize) {
        let half = (n_fft / 2) as isize;
        match self {
            WindowCase::Leading => (-(n_cp as isize), n + half - 1),
            WindowCase::Inside => (n, n + half - 1),
            WindowCase::Trailing => (n, n_fft as isize - 1),
        }
    }
}

/// Σ_{t=t0}^{t1} e^{j2πtδ/N} as e^{jπ(t0+t1)δ/N}·sin(πLδ/N)/sin(πδ/N);
/// δ ≡ 0 (mod N) takes the limit L.
fn rotated_run(delta: f64, t0: isize, t1: isize, n_fft: usize) -> Complex64 {
    let n = n_fft as f64;
    let len = (t1 - t0 + 1) as f64;
    // a shift of δ by N leaves e^{j2πtδ/N} unchanged for integer t
    let reduced = delta - n * (delta / n).round();
    if reduced == 0.0 {
        return Complex64::new(len, 0.0);
    }
    let theta = PI * reduced / n;
    let center = (t0 + t1) as f64;
    Complex64::from_polar((len * theta).sin() / theta.sin(), theta * center)
}

/// Closed-form b(n) of a single CP-extended symbol carrying `column`
/// (natural order), flat channel, nothing before or after it.
pub fn b_closed_form(column: &[Complex64], f: f64, nu: f64, n: isize, spec: &FrameSpec) -> Result<Complex64> {
    let n_fft = spec.n_fft();
    if column.len() != n_fft {
        return Err(invalid(format!("column has {} entries, expected {n_fft}", column.len())));
    }
    let case = WindowCase::of(n, n_fft, spec.n_cp).ok_or_else(|| {
        invalid(format!(
            "window start {n} overlaps symbol 0 in none of the three closed-form cases"
        ))
    })?;
    let (t0, t1) = case.span(n, n_fft, spec.n_cp);
    let norm = 1.0 / (n_fft as f64).sqrt();
    Ok(column
        .iter()
        .enumerate()
        .filter(|(_, d)| **d != Complex64::default())
        .map(|(pos, d)| {
            let k = spec.map.index_at(pos) as f64;
            d * norm * rotated_run(k - f + nu, t0, t1, n_fft)
        })
        .sum())
}

/// b(n) of `tx` seen through `channel`, assembled from flat-channel values:
/// Σ_l h(l)·e^{-j2π(f-ν)l/N}·b_flat(n-l).
pub fn b_multipath(
    tx: &TimeSignal,
    channel: &ChannelRealization,
    f: f64,
    nu: f64,
    n: isize,
    n_fft: usize,
) -> Result<Complex64> {
    let step = -2.0 * PI * (f - nu) / n_fft as f64;
    channel
        .taps()
        .iter()
        .enumerate()
        .map(|(l, h)| {
            let flat = b_direct(tx, f, nu, n - l as isize, n_fft)?;
            Ok(h * Complex64::from_polar(1.0, step * l as f64) * flat)
        })
        .sum()
}

/// Constant-envelope tone s·e^{j(2πfn/N + φ)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneParams {
    pub amplitude: f64,
    pub freq: f64,
    pub phase: f64,
}

impl ToneParams {
    pub fn at(&self, n: isize, n_fft: usize) -> Complex64 {
        Complex64::from_polar(
            self.amplitude,
            2.0 * PI * self.freq * n as f64 / n_fft as f64 + self.phase,
        )
    }
}

/// Noiseless r(n) = y(n)e^{j2πνn/N} + tone, on the same indices as `y`.
pub fn received(y: &TimeSignal, tone: &ToneParams, nu: f64, n_fft: usize) -> TimeSignal {
    let samples = (y.first_index()..y.end_index())
        .zip(&y.samples)
        .map(|(n, s)| s * Complex64::from_polar(1.0, 2.0 * PI * nu * n as f64 / n_fft as f64) + tone.at(n, n_fft))
        .collect();
    TimeSignal::new(samples, y.origin)
}

/// The parts of G(n) and Q(n) at one index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionRecord {
    pub g_y: Complex64,
    pub g_i: Complex64,
    pub g_cross: Complex64,
    pub q_i: Complex64,
    pub q_y: Complex64,
    pub q_cross: Complex64,
}

impl DecompositionRecord {
    pub fn g(&self) -> Complex64 {
        self.g_y + self.g_i + self.g_cross
    }

    pub fn q(&self) -> Complex64 {
        self.q_i + self.q_y + self.q_cross
    }
}

/// Splits G(n) and Q(n) of the noiseless mixture [`received`] into
/// signal, tone and cross parts. Needs `y(n) .. y(n+N-1)`.
pub fn decompose(y: &TimeSignal, tone: &ToneParams, nu: f64, n: isize, n_fft: usize) -> Result<DecompositionRecord> {
    let window = y.window(n, n_fft)?;
    let half = n_fft / 2;
    let quarter = n_fft / 4;
    let (f, s, phi) = (tone.freq, tone.amplitude, tone.phase);
    let ej = |x: f64| Complex64::from_polar(1.0, x);

    let g_y = ej(PI * nu) * (0..half).map(|m| window[m].conj() * window[m + half]).sum::<Complex64>();
    let lag = |k: usize| window[k].conj() * window[k + quarter];
    let q_y = ej(PI * nu / 2.0)
        * 0.5
        * (0..quarter)
            .map(|m| lag(m) + lag(m + quarter) * 2.0 + lag(m + half))
            .sum::<Complex64>();

    let g_i = ej(PI * f) * (half as f64 * s * s);
    let q_i = ej(PI * f / 2.0) * (half as f64 * s * s);

    let b = |offset: usize| b_direct(y, f, nu, n + offset as isize, n_fft);
    let (b0, b_quarter, b_half) = (b(0)?, b(quarter)?, b(half)?);
    let g_cross = ej(PI * f + phi) * s * b0.conj() + ej(PI * f - phi) * s * b_half;
    let q_cross = ej(PI * f / 2.0)
        * (s / 2.0)
        * ((b0.conj() + b_quarter.conj()) * ej(phi) + (b_quarter + b_half) * ej(-phi));

    Ok(DecompositionRecord {
        g_y,
        g_i,
        g_cross,
        q_i,
        q_y,
        q_cross,
    })
}

/// Where the cross-term power is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimingPosition {
    /// n = 0, the preamble's ideal start.
    Optimal,
    /// A uniformly drawn start inside the data symbols.
    RandomData,
}

impl TimingPosition {
    pub fn name(&self) -> &'static str {
        match self {
            TimingPosition::Optimal => "optimal",
            TimingPosition::RandomData => "random_data",
        }
    }
}

/// Setup of the cross-term power experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossPowerSetup {
    /// Interference frequency, also the notch center, in subcarriers.
    pub nbi_freq: f64,
    /// Subcarriers the notch is carved from (DC is always left out).
    pub span: std::ops::RangeInclusive<i32>,
    pub n_fft: usize,
    pub n_cp: usize,
    pub n_symbols: usize,
    pub n_empty_prefix: usize,
    pub sample_rate: f64,
    /// Frame CFO is drawn uniformly from ±`max_cfo` subcarriers.
    pub max_cfo: f64,
    pub bootstrap_resamples: usize,
}

impl Default for CrossPowerSetup {
    fn default() -> Self {
        Self {
            nbi_freq: 24.5,
            span: -100..=100,
            n_fft: 256,
            n_cp: 32,
            n_symbols: 11,
            n_empty_prefix: 3,
            sample_rate: 3.84e6,
            max_cfo: 10_500.0 / 15_000.0,
            bootstrap_resamples: 1000,
        }
    }
}

/// Ratio estimate with a 99% percentile-bootstrap interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub ratio: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// E|G_cross|² / (E|G_y|² + E|G_i|²) over `n_trials` COST 207 TU frames
/// with a tone at the notch center.
///
/// The notch removes every subcarrier within `notch_width / 2` of the tone.
/// Returns zeros when `sir_db` is +inf.
pub fn relative_cross_power(
    setup: &CrossPowerSetup,
    notch_width: u32,
    sir_db: f64,
    timing: TimingPosition,
    n_trials: usize,
    seed: u64,
) -> Result<RatioEstimate> {
    if n_trials == 0 {
        return Err(invalid("need at least one trial"));
    }
    if sir_db == f64::INFINITY {
        return Ok(RatioEstimate {
            ratio: 0.0,
            ci_low: 0.0,
            ci_high: 0.0,
        });
    }
    let map = SubcarrierMap::with_notch(setup.n_fft, setup.span.clone(), setup.nbi_freq, notch_width)?;
    let spec = FrameSpec::new(map, setup.n_cp, setup.n_symbols, setup.n_empty_prefix)?;
    let cell = [f64::from(notch_width), sir_db, timing as u8 as f64];

    let powers: Vec<[f64; 3]> = (0..n_trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, &cell, trial);
            cross_power_trial(setup, &spec, sir_db, timing, &mut rng)
        })
        .collect::<Result<_>>()?;

    let ratio_of = |idx: &mut dyn Iterator<Item = usize>| {
        let mut sums = [0.0; 3];
        for i in idx {
            for (s, p) in sums.iter_mut().zip(&powers[i]) {
                *s += p;
            }
        }
        sums[2] / (sums[0] + sums[1])
    };
    let ratio = ratio_of(&mut (0..n_trials));

    let mut rng = trial_rng(seed, &cell, u64::MAX);
    let mut boot: Vec<f64> = (0..setup.bootstrap_resamples)
        .map(|_| {
            let picks: Vec<usize> = (0..n_trials).map(|_| rng.random_range(0..n_trials)).collect();
            ratio_of(&mut picks.into_iter())
        })
        .collect();
    boot.sort_by(f64::total_cmp);
    let (ci_low, ci_high) = if boot.is_empty() {
        (ratio, ratio)
    } else {
        let at = |q: f64| boot[((q * (boot.len() - 1) as f64).round()) as usize];
        (at(0.005), at(0.995))
    };
    Ok(RatioEstimate {
        ratio,
        ci_low,
        ci_high,
    })
}

/// |G_y|², |G_i|², |G_cross|² of one frame.
fn cross_power_trial<R: Rng + ?Sized>(
    setup: &CrossPowerSetup,
    spec: &FrameSpec,
    sir_db: f64,
    timing: TimingPosition,
    rng: &mut R,
) -> Result<[f64; 3]> {
    let n_fft = spec.n_fft();
    let frame = random_frame(spec, rng)?;
    let channel = draw_channel_cost207tu(rng, setup.sample_rate)?;
    let y = apply_multipath(&frame.signal, &channel);
    let nu = rng.random_range(-setup.max_cfo..=setup.max_cfo);
    let phase = rng.random_range(0.0..2.0 * PI);

    // the tone amplitude that meets the SIR over the frame
    let unit = ToneParams {
        amplitude: 1.0,
        freq: setup.nbi_freq,
        phase,
    };
    let unit_tone = TimeSignal::new(
        (y.first_index()..y.end_index()).map(|n| unit.at(n, n_fft)).collect(),
        y.origin,
    );
    let mix = MixSpec {
        snr_db: f64::INFINITY,
        sir_db,
        cfo_norm: nu,
    };
    let amplitude = calibrate_and_mix(&y, &unit_tone, &mix, spec.active_range(), n_fft, rng)?.nbi_amplitude;
    let tone = ToneParams { amplitude, ..unit };

    let n = match timing {
        TimingPosition::Optimal => 0,
        TimingPosition::RandomData => {
            let first = (spec.symbol_len() - spec.n_cp) as isize;
            let last = y.end_index() - n_fft as isize;
            rng.random_range(first as i64..=last as i64) as isize
        }
    };
    let d = decompose(&y, &tone, nu, n, n_fft)?;
    Ok([d.g_y.norm_sqr(), d.g_i.norm_sqr(), d.g_cross.norm_sqr()])
}

/// One row of the cross-power table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossPowerRow {
    pub notch_scs: u32,
    pub sir_db: f64,
    pub timing: TimingPosition,
    pub estimate: RatioEstimate,
}

/// [`relative_cross_power`] over every (notch, SIR, timing) combination.
pub fn cross_power_table(
    setup: &CrossPowerSetup,
    notches: &[u32],
    sirs: &[f64],
    timings: &[TimingPosition],
    n_trials: usize,
    seed: u64,
) -> Result<Vec<CrossPowerRow>> {
    let mut rows = Vec::new();
    for &timing in timings {
        for &sir_db in sirs {
            for &notch_scs in notches {
                rows.push(CrossPowerRow {
                    notch_scs,
                    sir_db,
                    timing,
                    estimate: relative_cross_power(setup, notch_scs, sir_db, timing, n_trials, seed)?,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_cross_power_csv<W: std::io::Write>(rows: &[CrossPowerRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["notch_scs", "sir_db", "timing", "ratio", "ci_low", "ci_high"])?;
    for r in rows {
        w.write_record([
            r.notch_scs.to_string(),
            r.sir_db.to_string(),
            r.timing.name().to_string(),
            r.estimate.ratio.to_string(),
            r.estimate.ci_low.to_string(),
            r.estimate.ci_high.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Outcome of one self-check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn relative_error(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Cross-checks the closed forms, the multipath superposition and the
/// decomposition identities on random frames.
pub fn self_check(n_grids: usize, n_constructions: usize, seed: u64) -> Result<Vec<Check>> {
    let spec = FrameSpec::reference();
    let n_fft = spec.n_fft();
    let pad = n_fft;
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    let mut singular_worst = 0.0f64;
    for g in 0..n_grids as u64 {
        let mut rng = trial_rng(seed, &[1.0], g);
        let frame = random_frame(&spec, &mut rng)?;
        let column = &frame.grid.columns()[1];
        let body = crate::ofdm::modulate_symbol(column, &spec)?;
        let mut samples = vec![Complex64::default(); pad];
        samples.extend(body.samples);
        samples.extend(vec![Complex64::default(); pad]);
        let y = TimeSignal::new(samples, (pad + spec.n_cp) as isize);
        let f = rng.random_range(-100.0..100.0);
        let nu = rng.random_range(-0.9..0.9);
        // f - ν on an occupied subcarrier exercises the removable singularity
        let k = spec.map.occupied()[rng.random_range(0..spec.map.len())];
        for n in -(n_fft as isize / 2 + spec.n_cp as isize - 1)..n_fft as isize {
            let direct = b_direct(&y, f, nu, n, n_fft)?;
            worst = worst.max(relative_error(b_closed_form(column, f, nu, n, &spec)?, direct));
            let direct = b_direct(&y, k as f64 + nu, nu, n, n_fft)?;
            singular_worst = singular_worst.max(relative_error(
                b_closed_form(column, k as f64 + nu, nu, n, &spec)?,
                direct,
            ));
        }
    }
    checks.push(Check {
        name: "b(n) closed form vs direct, three window cases",
        passed: worst <= 1e-9,
        detail: format!("max relative error {worst:.3e} over {n_grids} grids"),
    });
    checks.push(Check {
        name: "b(n) closed form at a singular bin",
        passed: singular_worst <= 1e-9,
        detail: format!("max relative error {singular_worst:.3e}"),
    });

    let mut g_worst = 0.0f64;
    let mut q_worst = 0.0f64;
    let mut mp_worst = 0.0f64;
    for c in 0..n_constructions as u64 {
        let mut rng = trial_rng(seed, &[2.0], c);
        let frame = random_frame(&spec, &mut rng)?;
        let channel = draw_channel_cost207tu(&mut rng, 3.84e6)?;
        let y = apply_multipath(&frame.signal, &channel);
        let tone = ToneParams {
            amplitude: rng.random_range(0.1..3.0),
            freq: rng.random_range(-128.0..128.0),
            phase: rng.random_range(0.0..2.0 * PI),
        };
        let nu = rng.random_range(-0.9..0.9);
        let n = rng.random_range(y.first_index() as i64..=(y.end_index() - n_fft as isize) as i64) as isize;
        let r = received(&y, &tone, nu, n_fft);
        let window = r.window(n, n_fft)?;
        let half = n_fft / 2;
        let quarter = n_fft / 4;
        let g: Complex64 = (0..half).map(|m| window[m].conj() * window[m + half]).sum();
        let p = |k: usize| window[k].conj() * window[k + quarter];
        let q: Complex64 = (0..quarter).map(|m| p(m) + p(m + quarter) * 2.0 + p(m + half)).sum::<Complex64>() * 0.5;
        let d = decompose(&y, &tone, nu, n, n_fft)?;
        g_worst = g_worst.max((d.g() - g).norm() / g.norm());
        q_worst = q_worst.max((d.q() - q).norm() / q.norm());

        let f = tone.freq;
        let direct = b_direct(&y, f, nu, n, n_fft)?;
        mp_worst = mp_worst.max(relative_error(b_multipath(&frame.signal, &channel, f, nu, n, n_fft)?, direct));
    }
    checks.push(Check {
        name: "G = G_y + G_i + G_cross",
        passed: g_worst <= 1e-10,
        detail: format!("max relative error {g_worst:.3e} over {n_constructions} constructions"),
    });
    checks.push(Check {
        name: "Q = Q_i + Q_y + Q_cross",
        passed: q_worst <= 1e-10,
        detail: format!("max relative error {q_worst:.3e}"),
    });
    checks.push(Check {
        name: "multipath b(n) as a sum over paths",
        passed: mp_worst <= 1e-9,
        detail: format!("max relative error {mp_worst:.3e}"),
    });
    Ok(checks)
}
