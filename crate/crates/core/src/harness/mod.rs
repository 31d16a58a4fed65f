//! Scenario-driven Monte-Carlo runs and their CSV outputs.
//!
//! Trials are independent: each draws from its own generator keyed by the
//! master seed, the cell and the trial index ([`crate::seed::trial_rng`]).
//! Results are therefore identical for any thread count.

mod manifest;
mod run;
mod scenario;

pub use manifest::{write_manifest, Manifest};
pub use run::{
    count_ops, emit_trace, percentile_trace, plateau_level, run_nbi_bandwidth_sweep, run_scenario,
    score_reception, simulate_reception, write_percentile_csv, write_scenario_csv, write_sweep_csv, OpsRow,
    PercentileRow, PlateauStats, Reception, ScenarioRow, Spread, SweepRow,
};
pub use scenario::{preset, ChannelModel, Scenario, SweepSpec, TraceSpec, Uniform, PRESETS};
