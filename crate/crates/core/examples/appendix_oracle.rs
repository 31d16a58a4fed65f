// The cross-term oracle: closed-form b(n) against direct summation, and
// how the cross-term power falls as the notch around the tone widens.

use std::error::Error;

use ncofdm_sync::appendix::{relative_cross_power, self_check, CrossPowerSetup, TimingPosition};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for c in self_check(3, 20, 1)? {
        println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    let setup = CrossPowerSetup {
        bootstrap_resamples: 200,
        ..CrossPowerSetup::default()
    };
    println!("notch  E|G_cross|^2 / (E|G_y|^2 + E|G_i|^2), SIR 0 dB, optimal timing");
    for notch in [0, 14, 42] {
        let r = relative_cross_power(&setup, notch, 0.0, TimingPosition::Optimal, 100, 2)?;
        println!("{notch:5}  {:.2e}  [{:.2e}, {:.2e}]", r.ratio, r.ci_low, r.ci_high);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
