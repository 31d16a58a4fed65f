use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::scenario::{ChannelModel, Scenario, SweepSpec, Uniform};
use crate::error::{invalid, Result};
use crate::evaluate::{ber_preamble, classify, Aggregator, Summary, TrialOutcome, Truth};
use crate::impairments::{
    draw_channel_cost207tu, impair, ChannelRealization, MixSpec, NbiKind, NbiSpec,
};
use crate::ofdm::{random_frame, Frame, TimeSignal};
use crate::seed::trial_rng;
use crate::sync::{count_report, detect, metric_trace, synchronize, Detector, MetricTrace, Metrics, OpCounters, OpsPerSample};

/// One received frame with the ground truth needed to score it.
#[derive(Debug, Clone)]
pub struct Reception {
    pub frame: Frame,
    pub channel: ChannelRealization,
    pub cfo_norm: f64,
    pub received: TimeSignal,
}

fn draw<R: Rng + ?Sized>(rng: &mut R, u: Uniform) -> f64 {
    rng.random_range(u.lo..=u.hi)
}

/// Builds, impairs and returns one frame of `s` with interferer `nbi`.
pub fn simulate_reception<R: Rng + ?Sized>(
    s: &Scenario,
    nbi: NbiKind,
    snr_db: f64,
    sir_db: f64,
    rng: &mut R,
) -> Result<Reception> {
    let frame = random_frame(&s.frame, rng)?;
    let channel = match s.channel {
        ChannelModel::Cost207Tu => draw_channel_cost207tu(rng, s.sample_rate())?,
        ChannelModel::Flat => ChannelRealization::flat(),
    };
    let cfo_norm = draw(rng, s.cfo_hz) / s.sc_spacing_hz;
    let nbi = NbiSpec {
        kind: nbi,
        phase0: rng.random_range(0.0..2.0 * PI),
        freq_offset_hz: draw(rng, s.nbi_offset_hz),
        ..s.nbi_spec()
    };
    let mix = MixSpec {
        snr_db,
        sir_db,
        cfo_norm,
    };
    let mixture = impair(
        &frame.signal,
        s.frame.active_range(),
        &channel,
        &nbi,
        &mix,
        s.frame.n_fft(),
        rng,
    )?;
    Ok(Reception {
        frame,
        channel,
        cfo_norm,
        received: mixture.received,
    })
}

/// Runs every configured detector on one reception, searching the whole
/// buffer.
pub fn score_reception(s: &Scenario, rx: &Reception, algorithms: &[Detector]) -> Result<Vec<TrialOutcome>> {
    let metrics = match algorithms {
        [Detector::SchmidlCox] => Metrics::Sc,
        [Detector::Nirs] => Metrics::Nirs,
        _ => Metrics::Both,
    };
    let (trace, _) = metric_trace(&rx.received, s.frame.n_fft(), metrics)?;
    let truth = Truth {
        origin: 0,
        cfo_norm: rx.cfo_norm,
    };
    algorithms
        .iter()
        .map(|&d| {
            let result = detect(&trace, d, s.timing_rule)?;
            let bits = ber_preamble(&rx.received, &result, &rx.channel, &rx.frame.preamble, &s.frame)?;
            Ok(classify(&result, truth, s.frame.n_cp).with_bits(&bits))
        })
        .collect()
}

/// Runs `n_trials` trials in parallel and aggregates per algorithm, in
/// trial order, so the sums do not depend on scheduling.
fn run_cell(s: &Scenario, nbi: NbiKind, snr_db: f64, sir_db: f64, cell: &[f64], n_trials: u64) -> Result<Vec<Summary>> {
    let per_trial: Vec<Vec<TrialOutcome>> = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(s.master_seed, cell, trial);
            let rx = simulate_reception(s, nbi, snr_db, sir_db, &mut rng)?;
            score_reception(s, &rx, &s.algorithms)
        })
        .collect::<Result<_>>()?;
    let mut acc = vec![Aggregator::default(); s.algorithms.len()];
    for outcomes in &per_trial {
        for (a, o) in acc.iter_mut().zip(outcomes) {
            a.push(o);
        }
    }
    acc.iter().map(Aggregator::summary).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRow {
    pub snr_db: f64,
    pub sir_db: f64,
    pub algorithm: Detector,
    pub nbi_kind: &'static str,
    pub summary: Summary,
}

/// Every (SNR, SIR, algorithm) cell of the scenario grid.
pub fn run_scenario(s: &Scenario) -> Result<Vec<ScenarioRow>> {
    let mut rows = Vec::new();
    for &snr_db in &s.snr_grid {
        for &sir_db in &s.sir_grid {
            let summaries = run_cell(s, s.nbi, snr_db, sir_db, &[snr_db, sir_db], s.n_trials)?;
            for (&algorithm, summary) in s.algorithms.iter().zip(summaries) {
                rows.push(ScenarioRow {
                    snr_db,
                    sir_db,
                    algorithm,
                    nbi_kind: s.nbi.name(),
                    summary,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_scenario_csv<W: Write>(rows: &[ScenarioRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "snr_db",
        "sir_db",
        "algorithm",
        "nbi_kind",
        "p_sync_error",
        "ci_halfwidth",
        "mse_time",
        "mse_freq",
        "ber",
        "n_trials",
    ])?;
    for r in rows {
        let s = &r.summary;
        w.write_record([
            r.snr_db.to_string(),
            r.sir_db.to_string(),
            r.algorithm.to_string(),
            r.nbi_kind.to_string(),
            s.p_sync_error.to_string(),
            s.ci_halfwidth.to_string(),
            s.mse_time.to_string(),
            s.mse_freq.to_string(),
            s.ber.to_string(),
            s.n_trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub bandwidth_hz: f64,
    pub sir_db: f64,
    pub algorithm: Detector,
    pub summary: Summary,
}

/// Sync-error probability against the Carson bandwidth of a
/// 1 kHz-message FM interferer.
pub fn run_nbi_bandwidth_sweep(s: &Scenario, sweep: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &bandwidth_hz in &sweep.bandwidths_hz {
        let nbi = NbiKind::FmWideband { bandwidth_hz };
        nbi.fm_parameters()?;
        for &sir_db in &sweep.sir_db {
            let cell = [bandwidth_hz, sir_db, sweep.snr_db];
            let summaries = run_cell(s, nbi, sweep.snr_db, sir_db, &cell, s.n_trials)?;
            for (&algorithm, summary) in s.algorithms.iter().zip(summaries) {
                rows.push(SweepRow {
                    bandwidth_hz,
                    sir_db,
                    algorithm,
                    summary,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bandwidth_hz", "sir_db", "algorithm", "p_sync_error", "ci_halfwidth", "n_trials"])?;
    for r in rows {
        w.write_record([
            r.bandwidth_hz.to_string(),
            r.sir_db.to_string(),
            r.algorithm.to_string(),
            r.summary.p_sync_error.to_string(),
            r.summary.ci_halfwidth.to_string(),
            r.summary.n_trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Full metric trace of trial `trial` in cell (SNR, SIR).
pub fn emit_trace(s: &Scenario, snr_db: f64, sir_db: f64, trial: u64) -> Result<MetricTrace> {
    let mut rng = trial_rng(s.master_seed, &[snr_db, sir_db], trial);
    let rx = simulate_reception(s, s.nbi, snr_db, sir_db, &mut rng)?;
    Ok(metric_trace(&rx.received, s.frame.n_fft(), Metrics::Both)?.0)
}

/// 10th percentile, median and 90th percentile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spread {
    pub p10: f64,
    pub median: f64,
    pub p90: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercentileRow {
    pub n: isize,
    pub sc: Spread,
    pub nirs: Spread,
}

/// Per-index metric percentiles over `n_trials` frames, for indices from
/// the start of the buffer through the end of the preamble symbol.
pub fn percentile_trace(s: &Scenario, snr_db: f64, sir_db: f64, n_trials: u64) -> Result<Vec<PercentileRow>> {
    if n_trials == 0 {
        return Err(invalid("percentile mode needs at least one trial"));
    }
    let n_fft = s.frame.n_fft();
    let last = (s.frame.symbol_len() - s.frame.n_cp) as isize;
    let per_trial: Vec<(isize, Vec<f32>, Vec<f32>)> = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(s.master_seed, &[snr_db, sir_db], trial);
            let rx = simulate_reception(s, s.nbi, snr_db, sir_db, &mut rng)?;
            let (trace, _) = metric_trace(&rx.received, n_fft, Metrics::Both)?;
            let first = trace.first_index().unwrap_or(0);
            let keep = trace.records.iter().take_while(|r| r.n < last);
            let (sc, nirs) = keep
                .map(|r| (r.metric_sc.unwrap_or(0.0) as f32, r.metric_nirs.unwrap_or(0.0) as f32))
                .unzip();
            Ok((first, sc, nirs))
        })
        .collect::<Result<_>>()?;

    let first = per_trial[0].0;
    let len = per_trial.iter().map(|t| t.1.len()).min().unwrap_or(0);
    let spread = |column: &mut Vec<f32>| {
        column.sort_by(f32::total_cmp);
        let at = |q: f64| f64::from(column[(q * (column.len() - 1) as f64).round() as usize]);
        Spread {
            p10: at(0.1),
            median: at(0.5),
            p90: at(0.9),
        }
    };
    let mut column = Vec::with_capacity(per_trial.len());
    let mut rows = Vec::with_capacity(len);
    for i in 0..len {
        column.clear();
        column.extend(per_trial.iter().map(|t| t.1[i]));
        let sc = spread(&mut column);
        column.clear();
        column.extend(per_trial.iter().map(|t| t.2[i]));
        let nirs = spread(&mut column);
        rows.push(PercentileRow {
            n: first + i as isize,
            sc,
            nirs,
        });
    }
    Ok(rows)
}

pub fn write_percentile_csv<W: Write>(rows: &[PercentileRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "sc_p10", "sc_median", "sc_p90", "nirs_p10", "nirs_median", "nirs_p90"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.sc.p10.to_string(),
            r.sc.median.to_string(),
            r.sc.p90.to_string(),
            r.nirs.p10.to_string(),
            r.nirs.median.to_string(),
            r.nirs.p90.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Schmidl&Cox metric statistics on interference plus unit-power noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauStats {
    /// Interference-to-noise power ratio Γ.
    pub gamma: f64,
    /// Mean of |G/M|² over the indices.
    pub mean_metric: f64,
    /// |mean G| / mean M.
    pub ratio_of_means: f64,
}

/// Metric level ahead of a frame: a tone of power Γ at `freq` in
/// unit-power white noise, over `n_indices` consecutive indices.
pub fn plateau_level(gamma: f64, freq: f64, n_fft: usize, n_indices: usize, seed: u64) -> Result<PlateauStats> {
    if !(gamma >= 0.0) || n_indices == 0 {
        return Err(invalid("need Γ >= 0 and at least one index"));
    }
    let mut rng = trial_rng(seed, &[gamma, freq], 0);
    let phase = rng.random_range(0.0..2.0 * PI);
    let amplitude = gamma.sqrt();
    let sigma = 0.5f64.sqrt();
    let samples = (0..n_indices + n_fft - 1)
        .map(|n| {
            let noise = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * sigma;
            Complex64::from_polar(amplitude, 2.0 * PI * freq * n as f64 / n_fft as f64 + phase) + noise
        })
        .collect();
    let (trace, _) = metric_trace(&TimeSignal::new(samples, 0), n_fft, Metrics::Sc)?;
    let count = trace.len() as f64;
    let mean_metric = trace.records.iter().filter_map(|r| r.metric_sc).sum::<f64>() / count;
    let mean_g = trace.records.iter().map(|r| r.g).sum::<Complex64>() / count;
    let mean_m = trace.records.iter().map(|r| r.m).sum::<f64>() / count;
    Ok(PlateauStats {
        gamma,
        mean_metric,
        ratio_of_means: mean_g.norm() / mean_m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpsRow {
    pub detector: Detector,
    pub samples: u64,
    pub totals: OpCounters,
    pub per_sample: OpsPerSample,
}

/// Instrumented operation counts of each detector over one received frame.
pub fn count_ops(s: &Scenario, snr_db: f64, sir_db: f64) -> Result<Vec<OpsRow>> {
    let mut rng = trial_rng(s.master_seed, &[snr_db, sir_db], 0);
    let rx = simulate_reception(s, s.nbi, snr_db, sir_db, &mut rng)?;
    let samples = (rx.received.len() - s.frame.n_fft()) as u64;
    Detector::ALL
        .iter()
        .map(|&detector| {
            let result = synchronize(&rx.received, s.frame.n_fft(), detector, s.timing_rule)?;
            Ok(OpsRow {
                detector,
                samples,
                totals: result.ops,
                per_sample: count_report(&result.ops, samples)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::preset;

    fn small(name: &str, trials: u64) -> Scenario {
        let mut s = preset(name).unwrap();
        s.n_trials = trials;
        s
    }

    #[test]
    fn clean_flat_reception_synchronizes() {
        let mut s = small("fig3_ideal_nbi", 1);
        s.channel = ChannelModel::Flat;
        s.snr_grid = vec![f64::INFINITY];
        s.sir_grid = vec![100.0];
        let rows = run_scenario(&s).unwrap();
        assert_eq!(rows.len(), 2);
        for r in rows {
            assert_eq!(r.summary.p_sync_error, 0.0, "{}", r.algorithm);
            assert_eq!(r.summary.ber, 0.0);
        }
    }

    #[test]
    fn csv_layout() {
        let mut s = small("fig3_ideal_nbi", 3);
        s.snr_grid = vec![20.0];
        s.sir_grid = vec![0.0, f64::INFINITY];
        let rows = run_scenario(&s).unwrap();
        let mut buf = Vec::new();
        write_scenario_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("20,0,sc,ideal_tone,"));
        assert!(lines[4].starts_with("20,inf,nirs,ideal_tone,"));
        assert!(lines[4].ends_with(",3"));
    }

    #[test]
    fn trace_spans_the_buffer() {
        let s = small("fig1_trace", 1);
        let t = emit_trace(&s, f64::INFINITY, 0.0, 0).unwrap();
        assert_eq!(t.first_index(), Some(-(s.frame.origin() as isize)));
        assert_eq!(t.len(), s.frame.frame_len() - 256 + 1);
        assert!(t.records.iter().all(|r| r.metric_nirs.is_some() && r.metric_sc.is_some()));
    }

    #[test]
    fn percentile_rows_cover_prefix_and_preamble() {
        let s = small("fig1_trace", 1);
        let rows = percentile_trace(&s, f64::INFINITY, 100.0, 20).unwrap();
        assert_eq!(rows.first().unwrap().n, -(s.frame.origin() as isize));
        assert_eq!(rows.last().unwrap().n, 255);
        for r in &rows {
            assert!(r.sc.p10 <= r.sc.median && r.sc.median <= r.sc.p90);
        }
    }

    #[test]
    fn counted_operations_per_sample() {
        let s = small("fig3_ideal_nbi", 1);
        let rows = count_ops(&s, 20.0, 0.0).unwrap();
        let get = |d| rows.iter().find(|r| r.detector == d).unwrap().per_sample;
        let sc = get(Detector::SchmidlCox);
        let nirs = get(Detector::Nirs);
        assert_eq!((sc.add_sub, sc.mul_div), (10.0, 10.0));
        assert_eq!((nirs.add_sub, nirs.mul_div, nirs.sqrt), (24.0, 24.0, 1.0));
    }
}
