//! Receive-side impairment chain: multipath, carrier frequency offset,
//! narrowband interference and white noise, with SIR/SNR calibrated over the
//! non-empty part of the frame.

mod channel;
mod nbi;

pub use channel::{draw_channel_cost207tu, ChannelRealization, PowerDelayProfile, COST207_TU};
pub use nbi::{carson_bandwidth, carson_deviation, gen_nbi, NbiKind, NbiSpec, WIDEBAND_MESSAGE_HZ};

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::ofdm::{mean_power, TimeSignal};

/// y(n) = Σ_l x(n-l)·h(l). The output is `L - 1` samples longer; origin
/// is unchanged.
pub fn apply_multipath(x: &TimeSignal, channel: &ChannelRealization) -> TimeSignal {
    let taps = channel.taps();
    let mut out = vec![Complex64::default(); x.len() + taps.len() - 1];
    for (i, s) in x.samples.iter().enumerate() {
        if *s == Complex64::default() {
            continue;
        }
        for (l, h) in taps.iter().enumerate() {
            out[i + l] += s * h;
        }
    }
    TimeSignal::new(out, x.origin)
}

/// Multiplies sample n by e^{j2πνn/N}.
pub fn apply_cfo(x: &TimeSignal, nu: f64, n_fft: usize) -> TimeSignal {
    let step = 2.0 * PI * nu / n_fft as f64;
    let samples = x
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let n = i as isize - x.origin;
            s * Complex64::from_polar(1.0, step * n as f64)
        })
        .collect();
    TimeSignal::new(samples, x.origin)
}

/// Target ratios and the transmitter/receiver carrier offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixSpec {
    /// `f64::INFINITY` disables the noise.
    pub snr_db: f64,
    /// `f64::INFINITY` disables the interference.
    pub sir_db: f64,
    /// ν in subcarrier spacings, |ν| < 1.
    pub cfo_norm: f64,
}

impl MixSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfo_norm.abs() < 1.0) {
            return Err(invalid(format!(
                "CFO {} outside the (-1, 1) estimation range",
                self.cfo_norm
            )));
        }
        for (name, v) in [("snr_db", self.snr_db), ("sir_db", self.sir_db)] {
            if v.is_nan() || v == f64::NEG_INFINITY {
                return Err(invalid(format!("{name} must be finite or +inf, got {v}")));
            }
        }
        Ok(())
    }
}

/// The received signal together with its separately stored components.
#[derive(Debug, Clone)]
pub struct Mixture {
    pub received: TimeSignal,
    /// y(n)e^{j2πνn/N}
    pub signal: Vec<Complex64>,
    pub interference: Vec<Complex64>,
    pub noise: Vec<Complex64>,
    /// √σ_i², the interference amplitude.
    pub nbi_amplitude: f64,
    /// σ_w².
    pub noise_variance: f64,
}

impl Mixture {
    pub fn measured_sir_db(&self, active: Range<usize>) -> f64 {
        10.0 * (mean_power(&self.signal[active.clone()]) / mean_power(&self.interference[active])).log10()
    }

    pub fn measured_snr_db(&self, active: Range<usize>) -> f64 {
        10.0 * (mean_power(&self.signal[active.clone()]) / mean_power(&self.noise[active])).log10()
    }
}

/// r(n) = y(n)e^{j2πνn/N} + √σ_i²·i(n) + w(n).
///
/// Signal power is measured over `active` only; interference and noise
/// cover the whole buffer, empty prefix included. `nbi` must be unit
/// magnitude and as long as `y`.
pub fn calibrate_and_mix<R: Rng + ?Sized>(
    y: &TimeSignal,
    nbi: &TimeSignal,
    mix: &MixSpec,
    active: Range<usize>,
    n_fft: usize,
    rng: &mut R,
) -> Result<Mixture> {
    mix.validate()?;
    if nbi.len() != y.len() {
        return Err(invalid(format!(
            "interference has {} samples, signal has {}",
            nbi.len(),
            y.len()
        )));
    }
    if active.is_empty() || active.end > y.len() {
        return Err(invalid(format!("active region {active:?} not inside the signal")));
    }
    let signal_power = y.mean_power(active.clone());
    if !(signal_power > 0.0) {
        return Err(invalid("signal has zero power over the active region"));
    }
    let signal = apply_cfo(y, mix.cfo_norm, n_fft).samples;

    let interference_power = signal_power / db_to_linear(mix.sir_db);
    // measured, not assumed, so the ratio holds to rounding for any envelope
    let nbi_power = nbi.mean_power(active);
    let nbi_amplitude = if interference_power > 0.0 {
        (interference_power / nbi_power).sqrt()
    } else {
        0.0
    };
    let interference: Vec<Complex64> = nbi.samples.iter().map(|s| s * nbi_amplitude).collect();

    let noise_variance = signal_power / db_to_linear(mix.snr_db);
    let noise: Vec<Complex64> = if noise_variance > 0.0 {
        let sigma = (noise_variance / 2.0).sqrt();
        (0..y.len())
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * sigma
            })
            .collect()
    } else {
        vec![Complex64::default(); y.len()]
    };

    let received = signal
        .iter()
        .zip(&interference)
        .zip(&noise)
        .map(|((s, i), w)| s + i + w)
        .collect();
    Ok(Mixture {
        received: TimeSignal::new(received, y.origin),
        signal,
        interference,
        noise,
        nbi_amplitude,
        noise_variance,
    })
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Multipath, then CFO, interference and noise. `active` refers to the
/// transmitted frame buffer.
pub fn impair<R: Rng + ?Sized>(
    tx: &TimeSignal,
    active: Range<usize>,
    channel: &ChannelRealization,
    nbi: &NbiSpec,
    mix: &MixSpec,
    n_fft: usize,
    rng: &mut R,
) -> Result<Mixture> {
    let y = apply_multipath(tx, channel);
    let interference = gen_nbi(nbi, y.len(), n_fft, rng)?;
    calibrate_and_mix(&y, &interference, mix, active, n_fft, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ofdm::{random_frame, FrameSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ramp(len: usize) -> TimeSignal {
        TimeSignal::new((0..len).map(|i| c(i as f64, -(i as f64) / 2.0)).collect(), 3)
    }

    #[test]
    fn identity_channel() {
        let x = ramp(10);
        assert_eq!(apply_multipath(&x, &ChannelRealization::flat()), x);
    }

    #[test]
    fn delay_channel() {
        let x = ramp(10);
        let ch = ChannelRealization::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let y = apply_multipath(&x, &ch);
        assert_eq!(y.len(), 11);
        assert_eq!(y.origin, 3);
        assert_eq!(y.samples[0], c(0.0, 0.0));
        assert_eq!(&y.samples[1..], &x.samples[..]);
    }

    #[test]
    fn impulse_response() {
        let x = TimeSignal::new(vec![c(1.0, 0.0)], 0);
        let ch = ChannelRealization::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert_eq!(apply_multipath(&x, &ch).samples, vec![c(0.6, 0.0), c(0.0, 0.8)]);
    }

    #[test]
    fn cfo_identities() {
        let x = ramp(300);
        assert_eq!(apply_cfo(&x, 0.0, 256), x);
        let wrapped = apply_cfo(&x, 256.0, 256);
        let back = apply_cfo(&apply_cfo(&x, 0.37, 256), -0.37, 256);
        for i in 0..x.len() {
            let scale = x.samples[i].norm().max(1.0);
            assert!((wrapped.samples[i] - x.samples[i]).norm() < 1e-12 * scale);
            assert!((back.samples[i] - x.samples[i]).norm() < 1e-12 * scale);
        }
        let rotated = apply_cfo(&x, 0.81, 256);
        for (a, b) in rotated.samples.iter().zip(&x.samples) {
            assert!((a.norm() - b.norm()).abs() < 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn cfo_uses_origin() {
        let x = TimeSignal::new(vec![c(1.0, 0.0); 4], 2);
        let y = apply_cfo(&x, 64.0, 256);
        // sample n = 0 unrotated, n = 1 rotated by π/2
        assert!((y.samples[2] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((y.samples[3] - c(0.0, 1.0)).norm() < 1e-15);
    }

    fn frame_and_nbi(seed: u64) -> (FrameSpec, TimeSignal, TimeSignal) {
        let spec = FrameSpec::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = random_frame(&spec, &mut rng).unwrap();
        let nbi = gen_nbi(&NbiSpec::tone(24.5), frame.signal.len(), 256, &mut rng).unwrap();
        (spec, frame.signal, nbi)
    }

    #[test]
    fn zero_db_sir_balances_power() {
        let (spec, y, nbi) = frame_and_nbi(1);
        let mix = MixSpec {
            snr_db: f64::INFINITY,
            sir_db: 0.0,
            cfo_norm: 0.2,
        };
        let m = calibrate_and_mix(&y, &nbi, &mix, spec.active_range(), 256, &mut ChaCha8Rng::seed_from_u64(0))
            .unwrap();
        let a = spec.active_range();
        let ratio = mean_power(&m.interference[a.clone()]) / mean_power(&m.signal[a]);
        assert!((ratio - 1.0).abs() < 1e-9);
        assert!(m.noise.iter().all(|w| *w == Complex64::default()));
        // interference covers the empty prefix
        assert!(m.received.samples[..spec.active_range().start].iter().all(|r| r.norm() > 0.0));
    }

    #[test]
    fn hundred_db_sir() {
        let (spec, y, nbi) = frame_and_nbi(2);
        let mix = MixSpec {
            snr_db: f64::INFINITY,
            sir_db: 100.0,
            cfo_norm: 0.0,
        };
        let m = calibrate_and_mix(&y, &nbi, &mix, spec.active_range(), 256, &mut ChaCha8Rng::seed_from_u64(0))
            .unwrap();
        let a = spec.active_range();
        let ratio = mean_power(&m.signal[a.clone()]) / mean_power(&m.interference[a]);
        assert!((ratio / 1e10 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn calibration_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (snr, sir) in [(20.0, 0.0), (8.0, 100.0), (-5.0, -10.0), (13.5, 7.25)] {
            let (spec, y, nbi) = frame_and_nbi(rng.random());
            let mix = MixSpec {
                snr_db: snr,
                sir_db: sir,
                cfo_norm: -0.4,
            };
            let m = calibrate_and_mix(&y, &nbi, &mix, spec.active_range(), 256, &mut rng).unwrap();
            assert!((m.measured_sir_db(spec.active_range()) - sir).abs() < 0.01);
            let signal_power = mean_power(&m.signal[spec.active_range()]);
            assert!((10.0 * (signal_power / m.noise_variance).log10() - snr).abs() < 0.01);
            // noise power is a sample estimate over ~3000 draws
            assert!((m.measured_snr_db(spec.active_range()) - snr).abs() < 0.2);
        }
    }

    #[test]
    fn mixing_rejects_bad_input() {
        let (spec, y, nbi) = frame_and_nbi(4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ok = MixSpec {
            snr_db: 10.0,
            sir_db: 0.0,
            cfo_norm: 0.0,
        };
        let zero = TimeSignal::new(vec![Complex64::default(); y.len()], y.origin);
        assert!(calibrate_and_mix(&zero, &nbi, &ok, spec.active_range(), 256, &mut rng).is_err());
        let bad_cfo = MixSpec { cfo_norm: 1.0, ..ok };
        assert!(calibrate_and_mix(&y, &nbi, &bad_cfo, spec.active_range(), 256, &mut rng).is_err());
        let short = TimeSignal::new(nbi.samples[..10].to_vec(), 0);
        assert!(calibrate_and_mix(&y, &short, &ok, spec.active_range(), 256, &mut rng).is_err());
    }
}
