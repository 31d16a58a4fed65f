use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};

/// Tapped-delay-line channel, one complex coefficient per integer sample
/// delay `0..L`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    taps: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn new(taps: Vec<Complex64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(invalid("channel needs at least one tap"));
        }
        Ok(Self { taps })
    }

    /// h = [1].
    pub fn flat() -> Self {
        Self {
            taps: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn taps(&self) -> &[Complex64] {
        &self.taps
    }

    /// L, the delay span in samples.
    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// H at subcarrier k: Σ_l h(l) e^{-j2πkl/N}.
    pub fn response_at(&self, k: i32, n_fft: usize) -> Complex64 {
        self.taps
            .iter()
            .enumerate()
            .map(|(l, h)| h * Complex64::from_polar(1.0, -2.0 * PI * f64::from(k) * l as f64 / n_fft as f64))
            .sum()
    }
}

/// Power-delay profile of a Rayleigh tapped delay line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerDelayProfile {
    pub delays_us: &'static [f64],
    pub powers_db: &'static [f64],
}

/// COST 207 Typical Urban, 6 paths.
pub const COST207_TU: PowerDelayProfile = PowerDelayProfile {
    delays_us: &[0.0, 0.2, 0.5, 1.6, 2.3, 5.0],
    powers_db: &[-3.0, 0.0, -2.0, -6.0, -8.0, -10.0],
};

impl PowerDelayProfile {
    /// Tap delays rounded to the sample grid.
    pub fn sample_delays(&self, sample_rate: f64) -> Vec<usize> {
        self.delays_us
            .iter()
            .map(|d| (d * 1e-6 * sample_rate).round() as usize)
            .collect()
    }

    /// Linear path powers normalized to unit sum.
    pub fn linear_powers(&self) -> Vec<f64> {
        let lin: Vec<f64> = self.powers_db.iter().map(|p| 10f64.powf(p / 10.0)).collect();
        let total: f64 = lin.iter().sum();
        lin.into_iter().map(|p| p / total).collect()
    }

    /// One quasi-static Rayleigh draw. Paths that round onto the same
    /// sample add up.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, sample_rate: f64) -> Result<ChannelRealization> {
        if !(sample_rate > 0.0) {
            return Err(invalid(format!("sample rate must be positive, got {sample_rate}")));
        }
        let delays = self.sample_delays(sample_rate);
        let span = delays.iter().max().copied().unwrap_or(0) + 1;
        let mut taps = vec![Complex64::default(); span];
        for (&delay, power) in delays.iter().zip(self.linear_powers()) {
            let sigma = (power / 2.0).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            taps[delay] += Complex64::new(re, im) * sigma;
        }
        ChannelRealization::new(taps)
    }
}

pub fn draw_channel_cost207tu<R: Rng + ?Sized>(rng: &mut R, sample_rate: f64) -> Result<ChannelRealization> {
    COST207_TU.draw(rng, sample_rate)
}
