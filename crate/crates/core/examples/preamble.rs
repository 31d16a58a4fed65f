// Builds the half-repetitive preamble on the notched allocation and shows
// that its two halves match.

use std::error::Error;

use ncofdm_sync::ofdm::{generate_preamble, modulate_symbol, FrameSpec, Preamble};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = FrameSpec::reference();
    let map = &spec.map;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let preamble = generate_preamble(map, &mut rng)?;

    println!("occupied subcarriers: {}", map.len());
    println!("preamble subcarriers: {}", Preamble::subcarriers(map).len());
    println!("preamble bits:        {}", preamble.bits.len());

    let symbol = modulate_symbol(&preamble.column, &spec)?;
    let body = symbol.window(0, spec.n_fft())?;
    let half = spec.n_fft() / 2;
    let mismatch = (0..half).map(|m| (body[m] - body[m + half]).norm()).fold(0.0, f64::max);
    let power = body.iter().map(|s| s.norm_sqr()).sum::<f64>() / body.len() as f64;
    println!("max |x(m) - x(m+N/2)| = {mismatch:.2e}");
    println!("mean power            = {power:.4} (data symbols: {:.4})", map.len() as f64 / spec.n_fft() as f64);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
