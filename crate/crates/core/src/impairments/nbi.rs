//! Constant-envelope narrowband interferers.
//!
//! All variants are generated with unit magnitude; [`super::calibrate_and_mix`]
//! sets the power. Frequencies in Hz are converted with the sample rate
//! `N · sc_spacing_hz`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::ofdm::TimeSignal;

/// Message tone used by the wideband FM surrogate.
pub const WIDEBAND_MESSAGE_HZ: f64 = 1_000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NbiKind {
    /// Unmodulated complex sinusoid.
    IdealTone,
    /// Single-tone FM with explicit message frequency and peak deviation.
    FmCarson { message_hz: f64, deviation_hz: f64 },
    /// Single-tone FM with a [`WIDEBAND_MESSAGE_HZ`] message and the deviation
    /// that gives the requested Carson bandwidth. Stands in for a wireless
    /// microphone signal.
    FmWideband { bandwidth_hz: f64 },
}

impl NbiKind {
    pub fn name(&self) -> &'static str {
        match self {
            NbiKind::IdealTone => "ideal_tone",
            NbiKind::FmCarson { .. } => "fm_carson",
            NbiKind::FmWideband { .. } => "fm_wideband",
        }
    }

    /// Message frequency and peak deviation for the FM variants.
    pub fn fm_parameters(&self) -> Result<Option<(f64, f64)>> {
        match *self {
            NbiKind::IdealTone => Ok(None),
            NbiKind::FmCarson {
                message_hz,
                deviation_hz,
            } => {
                if !(message_hz > 0.0) || !(deviation_hz > 0.0) {
                    return Err(invalid(format!(
                        "FM message ({message_hz} Hz) and deviation ({deviation_hz} Hz) must be positive"
                    )));
                }
                Ok(Some((message_hz, deviation_hz)))
            }
            NbiKind::FmWideband { bandwidth_hz } => Ok(Some((
                WIDEBAND_MESSAGE_HZ,
                carson_deviation(bandwidth_hz, WIDEBAND_MESSAGE_HZ)?,
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbiSpec {
    pub kind: NbiKind,
    /// Center frequency in subcarrier spacings.
    pub center: f64,
    pub phase0: f64,
    /// The interferer's own carrier offset, in Hz, added to `center`.
    pub freq_offset_hz: f64,
    pub sc_spacing_hz: f64,
}

impl NbiSpec {
    pub fn tone(center: f64) -> Self {
        Self {
            kind: NbiKind::IdealTone,
            center,
            phase0: 0.0,
            freq_offset_hz: 0.0,
            sc_spacing_hz: 15_000.0,
        }
    }

    /// Effective carrier in subcarrier spacings.
    pub fn carrier(&self) -> f64 {
        self.center + self.freq_offset_hz / self.sc_spacing_hz
    }
}

/// Peak deviation giving Carson bandwidth `B = 2(Δf + f_m)`.
pub fn carson_deviation(bandwidth_hz: f64, message_hz: f64) -> Result<f64> {
    if !(message_hz > 0.0) {
        return Err(invalid(format!("message frequency must be positive, got {message_hz}")));
    }
    if !(bandwidth_hz > 2.0 * message_hz) {
        return Err(invalid(format!(
            "Carson bandwidth {bandwidth_hz} Hz must exceed twice the message frequency ({message_hz} Hz)"
        )));
    }
    Ok(bandwidth_hz / 2.0 - message_hz)
}

pub fn carson_bandwidth(deviation_hz: f64, message_hz: f64) -> f64 {
    2.0 * (deviation_hz + message_hz)
}

/// `length` unit-magnitude samples; sample `i` sits at time `i / fs`.
/// FM variants draw a uniform message phase from `rng`.
pub fn gen_nbi<R: Rng + ?Sized>(
    spec: &NbiSpec,
    length: usize,
    n_fft: usize,
    rng: &mut R,
) -> Result<TimeSignal> {
    if length == 0 {
        return Err(invalid("interference length must be positive"));
    }
    if !(spec.sc_spacing_hz > 0.0) {
        return Err(invalid("subcarrier spacing must be positive"));
    }
    let fm = spec.kind.fm_parameters()?;
    let carrier_step = 2.0 * PI * spec.carrier() / n_fft as f64;
    let samples = match fm {
        None => (0..length)
            .map(|i| Complex64::from_polar(1.0, carrier_step * i as f64 + spec.phase0))
            .collect(),
        Some((message_hz, deviation_hz)) => {
            let fs = n_fft as f64 * spec.sc_spacing_hz;
            let index = deviation_hz / message_hz;
            let message_step = 2.0 * PI * message_hz / fs;
            let theta: f64 = rng.random_range(0.0..2.0 * PI);
            // instantaneous frequency f0 + Δf·cos(2πf_m t + θ)
            (0..length)
                .map(|i| {
                    let t = i as f64;
                    let phase = carrier_step * t + spec.phase0 + index * (message_step * t + theta).sin();
                    Complex64::from_polar(1.0, phase)
                })
                .collect()
        }
    };
    Ok(TimeSignal::new(samples, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// RMS deviation of the unwrapped phase from its least-squares line.
    fn linear_phase_residual(samples: &[Complex64]) -> f64 {
        let mut phase = Vec::with_capacity(samples.len());
        let mut acc = samples[0].arg();
        phase.push(acc);
        for w in samples.windows(2) {
            acc += (w[1] * w[0].conj()).arg();
            phase.push(acc);
        }
        let n = phase.len() as f64;
        let mean_t = (n - 1.0) / 2.0;
        let mean_p = phase.iter().sum::<f64>() / n;
        let (mut cov, mut var) = (0.0, 0.0);
        for (t, p) in phase.iter().enumerate() {
            cov += (t as f64 - mean_t) * (p - mean_p);
            var += (t as f64 - mean_t).powi(2);
        }
        let slope = cov / var;
        let ss: f64 = phase
            .iter()
            .enumerate()
            .map(|(t, p)| (p - mean_p - slope * (t as f64 - mean_t)).powi(2))
            .sum();
        (ss / n).sqrt()
    }

    #[test]
    fn tone_starts_at_one_and_is_unimodular() {
        let spec = NbiSpec::tone(24.5);
        let s = gen_nbi(&spec, 4096, 256, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!((s.samples[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(s.samples.iter().all(|x| (x.norm() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn every_kind_has_constant_envelope() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for kind in [
            NbiKind::FmCarson {
                message_hz: 1e3,
                deviation_hz: 13e3,
            },
            NbiKind::FmWideband { bandwidth_hz: 200e3 },
        ] {
            let spec = NbiSpec {
                kind,
                phase0: 0.7,
                freq_offset_hz: -3_000.0,
                ..NbiSpec::tone(24.5)
            };
            let s = gen_nbi(&spec, 4096, 256, &mut rng).unwrap();
            assert!(s.samples.iter().all(|x| (x.norm() - 1.0).abs() < 1e-14));
        }
    }

    #[test]
    fn vanishing_deviation_converges_to_tone() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tone = gen_nbi(&NbiSpec::tone(24.5), 4032, 256, &mut rng).unwrap();
        let spec = NbiSpec {
            kind: NbiKind::FmCarson {
                message_hz: 1e3,
                deviation_hz: 1e-6 * 1e3,
            },
            ..NbiSpec::tone(24.5)
        };
        let fm = gen_nbi(&spec, 4032, 256, &mut rng).unwrap();
        let worst = tone
            .samples
            .iter()
            .zip(&fm.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn carson_inversion() {
        assert!((carson_deviation(28e3, 1e3).unwrap() - 13e3).abs() < 1e-9);
        assert!((carson_deviation(2.002e3, 1e3).unwrap() - 1.0).abs() < 1e-9);
        assert!((carson_bandwidth(13e3, 1e3) - 28e3).abs() < 1e-9);
        assert!(carson_deviation(2e3, 1e3).is_err());
        assert!(carson_deviation(-5.0, 1e3).is_err());
    }

    #[test]
    fn nonpositive_parameters_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bad = NbiSpec {
            kind: NbiKind::FmCarson {
                message_hz: 1e3,
                deviation_hz: 0.0,
            },
            ..NbiSpec::tone(1.0)
        };
        assert!(gen_nbi(&bad, 10, 256, &mut rng).is_err());
        let bad = NbiSpec {
            kind: NbiKind::FmWideband { bandwidth_hz: 0.0 },
            ..NbiSpec::tone(1.0)
        };
        assert!(gen_nbi(&bad, 10, 256, &mut rng).is_err());
        assert!(gen_nbi(&NbiSpec::tone(1.0), 0, 256, &mut rng).is_err());
    }

    #[test]
    fn narrow_fm_is_locally_linear_phase() {
        // worst case of the bound: B = 28 kHz
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for bandwidth in [4e3, 10e3, 28e3] {
            let spec = NbiSpec {
                kind: NbiKind::FmCarson {
                    message_hz: 1e3,
                    deviation_hz: carson_deviation(bandwidth, 1e3).unwrap(),
                },
                ..NbiSpec::tone(24.5)
            };
            let s = gen_nbi(&spec, 8192, 256, &mut rng).unwrap();
            let worst = (0..s.len() - 256)
                .step_by(7)
                .map(|start| linear_phase_residual(&s.samples[start..start + 256]))
                .fold(0.0, f64::max);
            assert!(worst < 0.1, "B = {bandwidth}: residual {worst}");
        }
    }
}
