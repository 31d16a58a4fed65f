// A reduced run of the ideal-tone preset: two SNR points, two SIR points,
// a few dozen trials per cell.

use std::error::Error;

use ncofdm_sync::harness::{preset, run_scenario, write_scenario_csv};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut s = preset("fig3_ideal_nbi")?;
    s.snr_grid = vec![8.0, 20.0];
    s.sir_grid = vec![0.0, 100.0];
    s.n_trials = 40;
    let rows = run_scenario(&s)?;
    write_scenario_csv(&rows, std::io::stdout())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
