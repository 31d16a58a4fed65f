// Feeds a pure tone through the O(1) correlator: G and Q carry the tone's
// phase signature and the NIRS numerator cancels it.

use std::error::Error;
use std::f64::consts::PI;

use ncofdm_sync::sync::{count_report, g_nirs, Correlator};
use ncofdm_sync::Complex64;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n_fft = 256;
    let f = 24.5;
    let tone = |n: usize| Complex64::from_polar(2.0, 2.0 * PI * f * n as f64 / n_fft as f64 + 0.3);

    let head: Vec<Complex64> = (0..n_fft).map(tone).collect();
    let mut c = Correlator::new(n_fft, true, &head)?;
    for n in n_fft..n_fft + 1000 {
        let s = c.push(tone(n));
        if n % 250 == 0 {
            println!(
                "n={:4}  |G|={:.1} arg G={:+.4}  |Q|={:.1} arg Q={:+.4}  |G_NIRS|={:.1e}",
                n + 1 - n_fft,
                s.g.norm(),
                s.g.arg(),
                s.q.norm(),
                s.q.arg(),
                g_nirs(s.g, s.q).norm()
            );
        }
    }
    let per = count_report(&c.ops(), c.samples_pushed())?;
    println!("correlator update: {} add/sub, {} mul/div per sample", per.add_sub, per.mul_div);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
