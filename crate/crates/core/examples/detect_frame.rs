// One frame under a strong tone: Schmidl&Cox locks onto the interference
// ahead of the frame, NIRS finds the preamble.

use std::error::Error;

use ncofdm_sync::evaluate::{ber_preamble, classify, Truth};
use ncofdm_sync::harness::{preset, simulate_reception};
use ncofdm_sync::sync::{synchronize, Detector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let s = preset("fig3_ideal_nbi")?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let rx = simulate_reception(&s, s.nbi, 20.0, 0.0, &mut rng)?;
    println!("true CFO: {:+.4} subcarriers", rx.cfo_norm);

    for detector in Detector::ALL {
        let result = synchronize(&rx.received, s.frame.n_fft(), detector, s.timing_rule)?;
        let truth = Truth {
            origin: 0,
            cfo_norm: rx.cfo_norm,
        };
        let outcome = classify(&result, truth, s.frame.n_cp);
        let bits = ber_preamble(&rx.received, &result, &rx.channel, &rx.frame.preamble, &s.frame)?;
        println!(
            "{:>4}: n̂={:+5}  ν̂={:+.4}  error={}  preamble bit errors {}/{}",
            detector, result.n_hat, result.nu_hat, outcome.is_sync_error, bits.bit_errors, bits.bits_total
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
