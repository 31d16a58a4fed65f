//! Gray-mapped QPSK with unit average symbol energy.
//!
//! Bit pair `(b0, b1)` maps to `((1 - 2·b0) + j(1 - 2·b1)) / √2`, so `00`
//! lands in the first quadrant and each bit selects the sign of one axis.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{invalid, Result};

pub fn map_qpsk(bits: &[bool]) -> Result<Vec<Complex64>> {
    if !bits.len().is_multiple_of(2) {
        return Err(invalid(format!(
            "QPSK needs an even bit count, got {}",
            bits.len()
        )));
    }
    Ok(bits
        .chunks_exact(2)
        .map(|pair| symbol(pair[0], pair[1]))
        .collect())
}

#[inline]
pub fn symbol(b0: bool, b1: bool) -> Complex64 {
    let axis = |b: bool| if b { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
    Complex64::new(axis(b0), axis(b1))
}

/// Nearest-quadrant decision. Points on an axis resolve towards bit 0.
pub fn demap_qpsk(symbols: &[Complex64]) -> Vec<bool> {
    symbols
        .iter()
        .flat_map(|s| [s.re < 0.0, s.im < 0.0])
        .collect()
}
