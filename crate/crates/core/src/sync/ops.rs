//! Real-arithmetic accounting. Every counted helper performs exactly the
//! real operations it books, so per-sample totals follow from the code
//! path rather than from a table.

use num_complex::Complex64;

/// Running totals of real operations. Square roots are kept apart from
/// multiplications.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub real_add_sub: u64,
    pub real_mul_div: u64,
    pub sqrt_ops: u64,
}

impl OpCounters {
    pub(crate) fn add(&mut self, a: f64, b: f64) -> f64 {
        self.real_add_sub += 1;
        a + b
    }

    pub(crate) fn sub(&mut self, a: f64, b: f64) -> f64 {
        self.real_add_sub += 1;
        a - b
    }

    pub(crate) fn mul(&mut self, a: f64, b: f64) -> f64 {
        self.real_mul_div += 1;
        a * b
    }

    pub(crate) fn div(&mut self, a: f64, b: f64) -> f64 {
        self.real_mul_div += 1;
        a / b
    }

    pub(crate) fn sqrt(&mut self, a: f64) -> f64 {
        self.sqrt_ops += 1;
        a.sqrt()
    }

    pub(crate) fn cadd(&mut self, a: Complex64, b: Complex64) -> Complex64 {
        Complex64::new(self.add(a.re, b.re), self.add(a.im, b.im))
    }

    pub(crate) fn csub(&mut self, a: Complex64, b: Complex64) -> Complex64 {
        Complex64::new(self.sub(a.re, b.re), self.sub(a.im, b.im))
    }

    /// conj(a)·b: 4 multiplications, 2 additions.
    pub(crate) fn conj_mul(&mut self, a: Complex64, b: Complex64) -> Complex64 {
        let rr = self.mul(a.re, b.re);
        let ii = self.mul(a.im, b.im);
        let ri = self.mul(a.re, b.im);
        let ir = self.mul(a.im, b.re);
        Complex64::new(self.add(rr, ii), self.sub(ri, ir))
    }

    pub(crate) fn scale(&mut self, a: Complex64, s: f64) -> Complex64 {
        Complex64::new(self.mul(a.re, s), self.mul(a.im, s))
    }

    /// |a|²: 2 multiplications, 1 addition.
    pub(crate) fn norm_sqr(&mut self, a: Complex64) -> f64 {
        let rr = self.mul(a.re, a.re);
        let ii = self.mul(a.im, a.im);
        self.add(rr, ii)
    }

    /// |a/m|² as |a|²/(m·m).
    pub(crate) fn metric(&mut self, a: Complex64, m: f64) -> f64 {
        let num = self.norm_sqr(a);
        let den = self.mul(m, m);
        let value = self.div(num, den);
        if m > 0.0 && value.is_finite() {
            value
        } else {
            0.0
        }
    }

    /// G - Q²/|Q|, falling back to G when |Q| = 0.
    pub(crate) fn nirs_numerator(&mut self, g: Complex64, q: Complex64) -> Complex64 {
        // Q²: 4 mul, 1 add
        let rr = self.mul(q.re, q.re);
        let ii = self.mul(q.im, q.im);
        let ri = self.mul(q.re, q.im);
        let q2 = Complex64::new(self.sub(rr, ii), self.mul(2.0, ri));
        // |Q|: 2 mul, 1 add, 1 sqrt
        let modulus = self.norm_sqr(q);
        let modulus = self.sqrt(modulus);
        // two real divisions, one complex subtraction
        let doubled = Complex64::new(self.div(q2.re, modulus), self.div(q2.im, modulus));
        let out = self.csub(g, doubled);
        if modulus > 0.0 {
            out
        } else {
            g
        }
    }
}

impl std::ops::AddAssign for OpCounters {
    fn add_assign(&mut self, rhs: Self) {
        self.real_add_sub += rhs.real_add_sub;
        self.real_mul_div += rhs.real_mul_div;
        self.sqrt_ops += rhs.sqrt_ops;
    }
}

/// Average operations per processed sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpsPerSample {
    pub add_sub: f64,
    pub mul_div: f64,
    pub sqrt: f64,
}

pub fn count_report(ops: &OpCounters, n_samples: u64) -> crate::Result<OpsPerSample> {
    if n_samples == 0 {
        return Err(crate::error::invalid("operation report over zero samples"));
    }
    let n = n_samples as f64;
    Ok(OpsPerSample {
        add_sub: ops.real_add_sub as f64 / n,
        mul_div: ops.real_mul_div as f64 / n,
        sqrt: ops.sqrt_ops as f64 / n,
    })
}
