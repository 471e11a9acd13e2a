//! Gauss–Kronrod quadrature with global adaptive refinement.
//!
//! Integrands in this crate are oscillatory (frequencies up to a few hundred
//! radians per unit) and piecewise smooth (kinks at prime powers, jumps at
//! zero ordinates). Callers therefore seed the refinement with their own
//! breakpoints: panel edges sized to the local period, or the exact points
//! where the integrand loses smoothness.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::reduce::pairwise;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Requested accuracy: the integral is accepted once the error estimate is
/// below `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn abs(abs: f64) -> Self {
        Tolerance { abs, rel: 0.0 }
    }

    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for QuadResult {
    type Output = QuadResult;
    fn add(self, rhs: QuadResult) -> QuadResult {
        QuadResult { value: self.value + rhs.value, error: self.error + rhs.error }
    }
}

impl Default for QuadResult {
    fn default() -> Self {
        QuadResult { value: 0.0, error: 0.0 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position so refinement order is
    // fully determined by the inputs.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

/// One 15-point Kronrod rule with its embedded 7-point Gauss estimate.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> QuadResult {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    QuadResult {
        value: res_k * half,
        error: rescale_error((res_k - res_g) * half, res_abs * h, res_asc * h),
    }
}

/// Global adaptive integration seeded with the intervals between
/// consecutive `points` (which must be sorted ascending).
pub fn integrate_over<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: Tolerance) -> Result<QuadResult> {
    if points.len() < 2 {
        return Ok(QuadResult::default());
    }
    let mut heap = BinaryHeap::with_capacity(points.len() * 2);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let r = gk15(&f, w[0], w[1]);
        total += r.value;
        total_err += r.error;
        heap.push(Panel { a: w[0], b: w[1], value: r.value, error: r.error });
    }
    let limit = heap.len() + 20_000;
    while total_err > tol.target(total) && heap.len() < limit {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at machine resolution.
            heap.push(Panel { error: 0.0, ..worst });
            total_err -= worst.error;
            continue;
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: left.value, error: left.error });
        heap.push(Panel { a: mid, b: worst.b, value: right.value, error: right.error });
    }
    // Re-sum in positional order so the value does not depend on the
    // running-total history.
    let mut panels = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
    let errors: Vec<f64> = panels.iter().map(|p| p.error).collect();
    let value = pairwise(&values);
    let error = pairwise(&errors);
    if !value.is_finite() {
        return Err(Error::Quadrature { estimate: value, error });
    }
    if error > tol.target(value) * 10.0 {
        return Err(Error::Quadrature { estimate: value, error });
    }
    Ok(QuadResult { value, error })
}

/// Integrate a smooth function on `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult::default());
    }
    if b < a {
        let r = integrate(f, b, a, tol)?;
        return Ok(QuadResult { value: -r.value, error: r.error });
    }
    integrate_over(f, &[a, b], tol)
}

/// Breakpoints splitting `[a, b]` into panels no wider than
/// `period / panels_per_period` where `period = 2π / frequency`.
pub fn oscillation_panels(a: f64, b: f64, frequency: f64, panels_per_period: u32) -> Vec<f64> {
    let width = b - a;
    if width <= 0.0 {
        return vec![a, b];
    }
    let n = if frequency > 0.0 {
        let panel = 2.0 * PI / frequency / panels_per_period.max(1) as f64;
        (width / panel).ceil().max(1.0) as usize
    } else {
        1
    };
    (0..=n).map(|i| if i == n { b } else { a + width * i as f64 / n as f64 }).collect()
}

/// Integrate an oscillatory integrand with the given angular frequency.
pub fn integrate_oscillatory<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    frequency: f64,
    panels_per_period: u32,
    tol: Tolerance,
) -> Result<QuadResult> {
    if b < a {
        let r = integrate_oscillatory(f, b, a, frequency, panels_per_period, tol)?;
        return Ok(QuadResult { value: -r.value, error: r.error });
    }
    integrate_over(f, &oscillation_panels(a, b, frequency, panels_per_period), tol)
}

/// Merge sorted breakpoint lists, splitting each interval further so that no
/// panel exceeds `max_width(x)` evaluated at its left end.
pub fn refine_breakpoints(points: &[f64], max_width: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len());
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let mw = max_width(lo);
        let n = if mw > 0.0 { ((hi - lo) / mw).ceil().max(1.0) as usize } else { 1 };
        for i in 0..n {
            out.push(lo + (hi - lo) * i as f64 / n as f64);
        }
    }
    if let Some(&last) = points.last() {
        out.push(last);
    }
    out
}
