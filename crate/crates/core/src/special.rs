//! Complex log-Γ and digamma.
//!
//! Both use the shift recurrence up to `|w| >= 15` and then the Stirling
//! (resp. asymptotic digamma) series with eight Bernoulli terms. Summing the
//! principal logarithms of `z, z+1, …` one by one keeps `Im log Γ` on the
//! branch obtained by analytic continuation from the positive real axis, so
//! on a vertical line `Re z = c > 0` the imaginary part is the continuously
//! varied argument rather than a value reduced to `(-π, π]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// Accuracy controls shared by the identity checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionPolicy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub series_terms: usize,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { abs_tol: 1e-9, rel_tol: 1e-12, series_terms: 8 }
    }
}

impl PrecisionPolicy {
    pub fn new(abs_tol: f64, rel_tol: f64, series_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || series_terms == 0 {
            return Err(crate::error::domain("tolerances must be positive and series_terms >= 1"));
        }
        Ok(PrecisionPolicy { abs_tol, rel_tol, series_terms })
    }
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const MIN_MODULUS: f64 = 15.0;
const MAX_SHIFT: f64 = 1e6;

// B_{2k} for k = 1..8.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

fn check_pole(z: Complex64, what: &str) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::Pole { what: what.to_string(), re: z.re, im: z.im });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(crate::error::domain(format!("non-finite argument {z}")));
    }
    Ok(())
}

fn shift_count(z: Complex64) -> Result<usize> {
    let n = if z.re < MIN_MODULUS && z.im.abs() < MIN_MODULUS {
        (MIN_MODULUS - z.re).ceil()
    } else if z.re < 0.0 {
        (-z.re).ceil()
    } else {
        0.0
    };
    if n > MAX_SHIFT {
        return Err(Error::Unsupported(format!("Re z = {} is too far left of the origin", z.re)));
    }
    Ok(n as usize)
}

/// Principal-branch `log Γ(z)`, continuous along vertical lines.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z, "log-gamma")?;
    let n = shift_count(z)?;
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..n {
        correction += (z + k as f64).ln();
    }
    let w = z + n as f64;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (k + 1) as f64;
        series += pow * (b / (m * (m - 1.0)));
        pow *= inv2;
    }
    let stirling = (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series;
    Ok(stirling - correction)
}

/// `Γ(z)` via `exp(log Γ(z))`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// `Γ'/Γ(z)`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    check_pole(z, "digamma")?;
    let n = shift_count(z)?;
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..n {
        correction += (z + k as f64).inv();
    }
    let w = z + n as f64;
    let inv2 = (w * w).inv();
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (k + 1) as f64;
        series += pow * (b / m);
        pow *= inv2;
    }
    Ok(w.ln() - 0.5 * w.inv() - series - correction)
}

/// `Re Γ'/Γ(1/2 + it)`.
pub fn digamma_re_half_line(t: f64) -> f64 {
    digamma(Complex64::new(0.5, t)).map(|c| c.re).unwrap_or(f64::NAN)
}

/// `Re Γ'/Γ(1/4 + it/2)`, the digamma term in `g'(t)`.
pub fn digamma_re_quarter_line(t: f64) -> f64 {
    digamma(Complex64::new(0.25, 0.5 * t)).map(|c| c.re).unwrap_or(f64::NAN)
}

/// `Im log Γ(1/4 + it/2)` on the continuous branch.
pub fn arg_gamma_quarter(t: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, 0.5 * t)).map(|c| c.im).unwrap_or(f64::NAN)
}

/// `arctan(sinh x)`, the Gudermannian, without overflowing `sinh`.
pub fn gudermannian(x: f64) -> f64 {
    if x.abs() > 30.0 {
        x.signum() * (PI / 2.0 - 2.0 * (-x.abs()).exp().atan())
    } else {
        x.sinh().atan()
    }
}
