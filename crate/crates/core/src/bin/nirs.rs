use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ncofdm_sync::appendix::{cross_power_table, self_check, write_cross_power_csv, CrossPowerSetup, TimingPosition};
use ncofdm_sync::harness::{
    count_ops, emit_trace, percentile_trace, run_nbi_bandwidth_sweep, run_scenario, write_manifest,
    write_percentile_csv, write_scenario_csv, write_sweep_csv, Manifest, Scenario, PRESETS,
};
use ncofdm_sync::{Error, Result};

/// NC-OFDM frame synchronization experiments.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo run over the scenario's SNR x SIR grid.
    Run {
        /// Scenario file, or the name of a bundled preset.
        scenario: String,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Timing-metric trace of one cell.
    Trace {
        scenario: String,
        /// SNR,SIR in dB; `inf` is allowed.
        #[arg(long, value_parser = parse_cell)]
        cell: Option<(f64, f64)>,
        /// Per-index 10/50/90th percentiles over many trials.
        #[arg(long)]
        percentiles: bool,
        /// Trials in percentile mode.
        #[arg(long)]
        trials: Option<u64>,
        /// Trial index in single-trace mode.
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sync-error probability against FM interferer bandwidth.
    SweepBandwidth {
        scenario: String,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Closed-form and decomposition checks plus the cross-term power table.
    ValidateAppendix {
        #[arg(long, default_value_t = 20)]
        grids: usize,
        #[arg(long, default_value_t = 100)]
        constructions: usize,
        /// Trials per cross-term power estimate.
        #[arg(long, default_value_t = 5000)]
        trials: usize,
        #[arg(long, default_value_t = 9)]
        seed: u64,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Real operations per sample of each detector.
    CountOps {
        #[arg(default_value = "fig3_ideal_nbi")]
        scenario: String,
    },
}

fn parse_cell(text: &str) -> std::result::Result<(f64, f64), String> {
    let (snr, sir) = text
        .split_once(',')
        .ok_or_else(|| format!("expected SNR,SIR, got '{text}'"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}"));
    Ok((parse(snr)?, parse(sir)?))
}

/// Reads a scenario file, falling back to a bundled preset of that name.
fn load(arg: &str) -> Result<(Scenario, String)> {
    let path = Path::new(arg);
    if path.exists() {
        let text = fs::read_to_string(path)?;
        return Ok((Scenario::load(path)?, text));
    }
    match PRESETS.iter().find(|(name, _)| *name == arg) {
        Some((name, text)) => Ok((Scenario::from_toml(text, name)?, text.to_string())),
        None => Err(Error::Config(format!(
            "'{arg}' is neither a file nor a preset ({})",
            PRESETS.map(|p| p.0).join(", ")
        ))),
    }
}

fn apply_overrides(s: &mut Scenario, trials: Option<u64>, seed: Option<u64>) -> Result<()> {
    if let Some(t) = trials {
        if t == 0 {
            return Err(Error::Config("--trials must be at least 1".into()));
        }
        s.n_trials = t;
    }
    if let Some(seed) = seed {
        s.master_seed = seed;
    }
    Ok(())
}

fn create(dir: &Path, file: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(file))?))
}

fn finish(dir: &Path, mut manifest: Manifest, output: String) -> Result<()> {
    manifest.outputs.push(output);
    let mut w = create(dir, "manifest.txt")?;
    write_manifest(&manifest, &mut w)?;
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            scenario,
            trials,
            seed,
            out,
        } => {
            let (mut s, text) = load(&scenario)?;
            apply_overrides(&mut s, trials, seed)?;
            let rows = run_scenario(&s)?;
            let file = format!("{}.csv", s.name);
            let mut w = create(&out, &file)?;
            write_scenario_csv(&rows, &mut w)?;
            w.flush()?;
            finish(&out, Manifest::new(&s.name, &text, s.master_seed, s.n_trials), file.clone())?;
            println!("wrote {}", out.join(file).display());
        }
        Command::Trace {
            scenario,
            cell,
            percentiles,
            trials,
            trial,
            seed,
            out,
        } => {
            let (mut s, _) = load(&scenario)?;
            apply_overrides(&mut s, None, seed)?;
            let (snr, sir) = cell
                .or(s.trace.map(|t| (t.snr_db, t.sir_db)))
                .ok_or_else(|| Error::Config("no --cell given and the scenario has no [trace] section".into()))?;
            let sink: Box<dyn Write> = match &out {
                Some(path) => Box::new(BufWriter::new(File::create(path)?)),
                None => Box::new(io::stdout().lock()),
            };
            if percentiles {
                let n = trials.or(s.trace.map(|t| t.percentile_trials)).unwrap_or(10_000);
                write_percentile_csv(&percentile_trace(&s, snr, sir, n)?, sink)?;
            } else {
                emit_trace(&s, snr, sir, trial)?.write_csv(sink)?;
            }
        }
        Command::SweepBandwidth {
            scenario,
            trials,
            seed,
            out,
        } => {
            let (mut s, text) = load(&scenario)?;
            apply_overrides(&mut s, trials, seed)?;
            let sweep = s
                .sweep
                .clone()
                .ok_or_else(|| Error::Config(format!("scenario '{}' has no [sweep] section", s.name)))?;
            let rows = run_nbi_bandwidth_sweep(&s, &sweep)?;
            let file = format!("{}_sweep.csv", s.name);
            let mut w = create(&out, &file)?;
            write_sweep_csv(&rows, &mut w)?;
            w.flush()?;
            finish(&out, Manifest::new(&s.name, &text, s.master_seed, s.n_trials), file.clone())?;
            println!("wrote {}", out.join(file).display());
        }
        Command::ValidateAppendix {
            grids,
            constructions,
            trials,
            seed,
            out,
        } => {
            let checks = self_check(grids, constructions, seed)?;
            let mut failed = 0;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed += usize::from(!c.passed);
            }
            let rows = cross_power_table(
                &CrossPowerSetup::default(),
                &[0, 6, 14, 26, 42],
                &[-10.0, 0.0, 10.0],
                &[TimingPosition::Optimal, TimingPosition::RandomData],
                trials,
                seed,
            )?;
            let file = "fig9_cross_power.csv";
            let mut w = create(&out, file)?;
            write_cross_power_csv(&rows, &mut w)?;
            w.flush()?;
            println!("wrote {}", out.join(file).display());
            if failed > 0 {
                return Err(Error::InvalidArgument(format!("{failed} appendix check(s) failed")));
            }
        }
        Command::CountOps { scenario } => {
            let (s, _) = load(&scenario)?;
            println!("detector,samples,add_sub_per_sample,mul_div_per_sample,sqrt_per_sample");
            for r in count_ops(&s, 20.0, 0.0)? {
                let p = r.per_sample;
                println!("{},{},{},{},{}", r.detector, r.samples, p.add_sub, p.mul_div, p.sqrt);
            }
        }
    }
    Ok(())
}
