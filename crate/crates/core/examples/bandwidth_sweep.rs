// Sync-error probability against the Carson bandwidth of an FM
// interferer, at SIR 0 dB and SNR 20 dB.

use std::error::Error;

use ncofdm_sync::harness::{preset, run_nbi_bandwidth_sweep, write_sweep_csv, SweepSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut s = preset("fig8_nbi_bandwidth")?;
    s.n_trials = 30;
    let sweep = SweepSpec {
        bandwidths_hz: vec![4e3, 28e3, 200e3],
        sir_db: vec![0.0],
        snr_db: 20.0,
    };
    let rows = run_nbi_bandwidth_sweep(&s, &sweep)?;
    write_sweep_csv(&rows, std::io::stdout())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
