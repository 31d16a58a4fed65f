// Passes a frame through a COST 207 TU channel, a carrier offset, a
// 200 kHz FM interferer and noise, then measures the realized ratios.

use std::error::Error;

use ncofdm_sync::impairments::{draw_channel_cost207tu, impair, MixSpec, NbiKind, NbiSpec, COST207_TU};
use ncofdm_sync::ofdm::{random_frame, FrameSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = FrameSpec::reference();
    let sample_rate = 3.84e6;
    let mut rng = ChaCha8Rng::seed_from_u64(2);

    println!("TU tap delays (samples): {:?}", COST207_TU.sample_delays(sample_rate));
    let frame = random_frame(&spec, &mut rng)?;
    let channel = draw_channel_cost207tu(&mut rng, sample_rate)?;
    let nbi = NbiSpec {
        kind: NbiKind::FmWideband { bandwidth_hz: 200e3 },
        freq_offset_hz: 7_000.0,
        ..NbiSpec::tone(24.5)
    };
    let mix = MixSpec {
        snr_db: 15.0,
        sir_db: -5.0,
        cfo_norm: 0.42,
    };
    let out = impair(&frame.signal, spec.active_range(), &channel, &nbi, &mix, spec.n_fft(), &mut rng)?;
    let active = spec.active_range();
    println!("received samples: {}", out.received.len());
    println!("measured SIR: {:.3} dB", out.measured_sir_db(active.clone()));
    println!("measured SNR: {:.3} dB", out.measured_snr_db(active));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
