//! The reciprocal pair of integral equations linking S(t) and Δ̃(x), the
//! X-indexed kernel family K_X(t, t'), and the smoothed transform J_ε(k).
//!
//! The inverse map recovers S(t) from arithmetic data:
//! `S(t) = −(1/π)∫_a^∞ F(t,y)Δ̃(y)dy + g(a,t)` with `F = ∂²φ/∂y²` and
//! `φ(y) = sin(t ln y)/(√y ln y)`. The forward map recovers Δ̃(x) from the
//! zero catalog: `Δ̃(x) = −2x^{3/2}∫₀^T K̂(x,t)S(t)dt + f_ext(x)`, where
//! `K̂ = −∂w/∂t` and `w(x,t)` is the per-zero weight of the explicit formula.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::arithmetic::MangoldtTable;
use crate::error::{domain, Error, Result};
use crate::explicit::{trivial_series, zero_bracket, zero_tail_sum_inverse_square};
use crate::quadrature::{integrate_over, refine_breakpoints, QuadResult, Tolerance};
use crate::reduce::det_sum;
use crate::report::VerificationReport;
use crate::special::digamma_re_half_line;
use crate::zeros::ZeroCatalog;
use crate::zeta::{
    sine_log_integral, smooth_count_g_derivative, zeta_logderiv_accelerated, LN_2PI, LN_PI,
};

/// Truncation and panel sizing for one of the integral maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Upper limit: `y_max` for the inverse map, `t_max` for the forward map.
    pub upper: f64,
    pub panels_per_period: u32,
    pub abs_tol: f64,
    /// Lower limit of the inverse map, in `(1, 2)`.
    pub a: f64,
    /// Largest acceptable truncation-tail estimate.
    pub tail_tol: f64,
}

impl QuadratureSpec {
    pub fn new(upper: f64, panels_per_period: u32, abs_tol: f64, a: f64) -> Result<Self> {
        if panels_per_period < 4 {
            return Err(domain(format!("panels_per_period must be at least 4, got {panels_per_period}")));
        }
        if !(abs_tol > 0.0) {
            return Err(domain(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if !(a > 1.0 && a < 2.0) {
            return Err(domain(format!("a must lie in (1, 2), got {a}")));
        }
        if !(upper > 0.0) {
            return Err(domain(format!("upper limit must be positive, got {upper}")));
        }
        Ok(QuadratureSpec { upper, panels_per_period, abs_tol, a, tail_tol: 1.0 })
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Self {
        self.tail_tol = tail_tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEval {
    pub value: f64,
    pub tail_estimate: f64,
    pub quad_error: f64,
}

/// Which form of the boundary term `g(a, t)` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryConvention {
    /// Stated form: `+ (arctan 2t − π)` and the y-derivative factor
    /// `[t cos − sin·(ln y/2 + 1)]/(y^{3/2} ln² y)`.
    Stated,
    /// Re-derived from the Guinand formula by parts: `−(arctan 2t − π)` and
    /// `φ'(y) = [t ln y·cos − sin·(ln y/2 + 1)]/(y^{3/2} ln² y)`.
    Corrected,
}

/// `F(t, y)`, six terms over `y^{5/2}`; equal to `∂²/∂y² [sin(t ln y)/(√y ln y)]`.
pub fn kernel_f(t: f64, y: f64) -> Result<f64> {
    if !(y > 1.0) {
        return Err(domain(format!("kernel F needs y > 1, got {y}")));
    }
    Ok(kernel_f_unchecked(t, y))
}

#[inline]
fn kernel_f_unchecked(t: f64, y: f64) -> f64 {
    let l = y.ln();
    let (s, c) = (t * l).sin_cos();
    let l2 = l * l;
    let num = -t * t * s / l - 2.0 * t * c / l + 0.75 * s / l - 2.0 * t * c / l2 + 2.0 * s / l2 + 2.0 * s / (l2 * l);
    num / (y * y * y.sqrt())
}

/// `φ'(y)` for `φ(y) = sin(t ln y)/(√y ln y)`.
#[inline]
fn phi_prime(t: f64, y: f64) -> f64 {
    let l = y.ln();
    let (s, c) = (t * l).sin_cos();
    (t * l * c - s * (0.5 * l + 1.0)) / (y * y.sqrt() * l * l)
}

#[inline]
fn phi(t: f64, y: f64) -> f64 {
    let l = y.ln();
    (t * l).sin() / (y.sqrt() * l)
}

/// `K(x, t)` in its stated form: the numerator of `∂w/∂t` over
/// `(t⁴ + 5t²/2 + 9/16)²`.
pub fn kernel_k(x: f64, t: f64) -> f64 {
    let l = x.ln();
    let (s, c) = (t * l).sin_cos();
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t2 * t2;
    let t5 = t4 * t;
    let t6 = t3 * t3;
    l * (t6 * s + 2.0 * t5 * c + 1.75 * t4 * s + 5.0 * t3 * c - 21.0 / 16.0 * t2 * s + 1.125 * t * c - 27.0 / 64.0 * s)
        + 2.0 * t5 * c
        - 6.0 * t4 * s
        - 3.0 * t3 * c
        - 5.0 * t2 * s
        - 39.0 / 8.0 * t * c
        + 1.125 * s
}

/// `(3/4 − t²)² + 4t² = t⁴ + 5t²/2 + 9/16`.
#[inline]
pub fn weight_denominator(t: f64) -> f64 {
    let t2 = t * t;
    t2 * t2 + 2.5 * t2 + 0.5625
}

/// The kernel that makes the forward map hold: `−K(x,t)/D(t)² = −∂w/∂t`.
pub fn kernel_k_normalized(x: f64, t: f64) -> f64 {
    let d = weight_denominator(t);
    -kernel_k(x, t) / (d * d)
}

/// `g(a, t)` for the inverse map, in either convention.
pub fn boundary_g(a: f64, t: f64, table: &MangoldtTable, convention: BoundaryConvention) -> Result<f64> {
    if !(a > 1.0 && a < 2.0) {
        return Err(domain(format!("a must lie in (1, 2), got {a}")));
    }
    let f2 = sine_log_integral(t, a, Tolerance::new(1e-14, 1e-14))?;
    let delta = table.delta_unchecked(a);
    let delta_tilde = table.delta_tilde_unchecked(a);
    let l = a.ln();
    let (s, c) = (t * l).sin_cos();
    let arctan = (2.0 * t).atan() - PI;
    let inner = match convention {
        BoundaryConvention::Stated => {
            let h = (t * c - s * (0.5 * l + 1.0)) / (a * a.sqrt() * l * l);
            -f2 - delta * phi(t, a) + delta_tilde * h + arctan
        }
        BoundaryConvention::Corrected => -f2 - delta * phi(t, a) + delta_tilde * phi_prime(t, a) - arctan,
    };
    Ok(-inner / PI)
}

fn sum_panels(panels: &[QuadResult]) -> QuadResult {
    panels.iter().fold(QuadResult::default(), |acc, &r| acc + r)
}

/// `−(1/π)∫_a^{y_max} F(t,y)Δ̃(y)dy + g(a,t)` with the corrected boundary term.
pub fn inverse_map(t: f64, spec: &QuadratureSpec, table: &MangoldtTable) -> Result<KernelEval> {
    inverse_map_with(t, spec, table, BoundaryConvention::Corrected)
}

pub fn inverse_map_with(
    t: f64,
    spec: &QuadratureSpec,
    table: &MangoldtTable,
    convention: BoundaryConvention,
) -> Result<KernelEval> {
    if !(t > 0.0) {
        return Err(domain(format!("t must be positive, got {t}")));
    }
    let y_max = spec.upper;
    if y_max > table.n_max() as f64 {
        return Err(Error::Coverage { requested: y_max, available: table.n_max() as f64 });
    }
    if !(y_max > spec.a) {
        return Err(domain(format!("y_max {y_max} must exceed a = {}", spec.a)));
    }
    let integral = integral_f_delta_tilde(t, spec.a, y_max, spec, table)?;
    let g = boundary_g(spec.a, t, table, convention)?;
    let ln_y = y_max.ln();
    let endpoint = (table.delta_tilde_unchecked(y_max) * phi_prime(t, y_max)).abs();
    let tail_estimate = (endpoint + (1.0 + (1.0 + t).ln()) / ln_y) / PI;
    if tail_estimate > spec.tail_tol {
        return Err(Error::Truncation { tail: tail_estimate, tolerance: spec.tail_tol });
    }
    Ok(KernelEval { value: -integral.value / PI + g, tail_estimate, quad_error: integral.error / PI })
}

/// `∫_a^Y F(t,y)Δ̃(y)dy`, split at prime powers and at fractions of the
/// local period `2πy/t`. The ranges between breakpoints are integrated
/// independently and summed in order.
pub fn integral_f_delta_tilde(t: f64, a: f64, y_max: f64, spec: &QuadratureSpec, table: &MangoldtTable) -> Result<QuadResult> {
    let ppp = spec.panels_per_period as f64;
    let coarse = table.breakpoints(a, y_max);
    let points = refine_breakpoints(&coarse, |y| (2.0 * PI * y / (t.max(1.0) * ppp)).min(0.25 * y));
    let f = |y: f64| kernel_f_unchecked(t, y) * table.delta_tilde_unchecked(y);
    chunked_integral(f, &points, spec.abs_tol)
}

// Integrate over consecutive blocks of breakpoints so each adaptive run
// stays small; blocks are fixed by position, not by thread count.
fn chunked_integral<F: Fn(f64) -> f64 + Sync>(f: F, points: &[f64], abs_tol: f64) -> Result<QuadResult> {
    const BLOCK: usize = 256;
    if points.len() < 2 {
        return Ok(QuadResult::default());
    }
    let n_blocks = (points.len() - 1).div_ceil(BLOCK);
    let per_block = abs_tol / n_blocks as f64;
    let results: Vec<Result<QuadResult>> = crate::reduce::map_indexed(n_blocks, |b| {
        let lo = b * BLOCK;
        let hi = ((b + 1) * BLOCK).min(points.len() - 1);
        integrate_over(&f, &points[lo..=hi], Tolerance::abs(per_block))
    });
    let mut panels = Vec::with_capacity(results.len());
    for r in results {
        panels.push(r?);
    }
    let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
    Ok(QuadResult { value: crate::reduce::pairwise(&values), error: sum_panels(&panels).error })
}

/// `−2x^{3/2}∫₀^T K̂(x,t)S(t)dt + f_ext(x)` with
/// `f_ext = −2x^{3/2}[∫₀^T w g' dt + w(T)S(T)] + (8/3)S(0)x^{3/2} − x ln 2π − Σ x^{1−2n}/(2n(2n−1))`.
pub fn forward_map(x: f64, spec: &QuadratureSpec, catalog: &ZeroCatalog) -> Result<KernelEval> {
    if !(x > 1.0) {
        return Err(domain(format!("x must exceed 1, got {x}")));
    }
    let t_max = spec.upper;
    if t_max > catalog.t_max() {
        return Err(Error::Coverage { requested: t_max, available: catalog.t_max() });
    }
    let l = x.ln();
    let ppp = spec.panels_per_period as f64;
    let mut coarse = vec![0.0];
    coarse.extend(catalog.below(t_max).iter().copied().filter(|&o| o < t_max));
    coarse.push(t_max);
    let points = refine_breakpoints(&coarse, |_| (2.0 * PI / (l.max(0.5) * ppp)).min(1.0));
    let tol = spec.abs_tol / (2.0 * x * x.sqrt());
    let ks = chunked_integral(|t| kernel_k_normalized(x, t) * catalog.s_right(t), &points, 0.5 * tol)?;
    let wg = chunked_integral(|t| zero_bracket(t, l) * smooth_count_g_derivative(t), &points, 0.5 * tol)?;
    let x32 = x * x.sqrt();
    let s0 = catalog.s_right(0.0);
    let end = zero_bracket(t_max, l) * catalog.s_right(t_max);
    let value = -2.0 * x32 * (ks.value + wg.value + end) + 8.0 / 3.0 * s0 * x32 - x * LN_2PI - trivial_series(x);
    let quad_error = 2.0 * x32 * (ks.error + wg.error);
    let tail_estimate = x32 * zero_tail_sum_inverse_square(t_max);
    Ok(KernelEval { value, tail_estimate, quad_error })
}

/// Settings for [`residual_system`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemConfig {
    pub inverse: QuadratureSpec,
    pub forward: QuadratureSpec,
    /// Additive constant `c` with `Δ̃_arith ≈ Δ̃_zeros + c`.
    pub offset: f64,
    /// Acceptance band for the inverse equation.
    pub inverse_tol: f64,
}

/// Residuals of both equations: the inverse map against catalog S(t) at
/// each `t`, and the forward map (plus offset) against arithmetic Δ̃(x) at
/// each `x`.
pub fn residual_system(
    x_grid: &[f64],
    t_grid: &[f64],
    config: &SystemConfig,
    table: &MangoldtTable,
    catalog: &ZeroCatalog,
) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::with_capacity(x_grid.len() + t_grid.len());
    for &t in t_grid {
        let start = std::time::Instant::now();
        let s = catalog.s_of_t(t)?;
        let inv = inverse_map(t, &config.inverse, table)?;
        out.push(
            VerificationReport::new("inverse_map", &[("t", t), ("y_max", config.inverse.upper)], s, inv.value, config.inverse_tol)
                .tail(inv.tail_estimate + inv.quad_error)
                .timed(start),
        );
    }
    for &x in x_grid {
        let start = std::time::Instant::now();
        let arith = table.delta_tilde(x)?;
        let fwd = forward_map(x, &config.forward, catalog)?;
        let tol = fwd.tail_estimate + fwd.quad_error;
        out.push(
            VerificationReport::new("forward_map", &[("x", x), ("t_max", config.forward.upper)], arith, fwd.value + config.offset, tol)
                .tail(tol)
                .timed(start),
        );
    }
    Ok(out)
}

#[inline]
fn sinc_scaled(z: f64, l: f64) -> f64 {
    let zl = z * l;
    if zl.abs() < 1e-4 {
        l * (1.0 - zl * zl / 6.0)
    } else {
        zl.sin() / z
    }
}

/// `K_X(t, t')` in its stated form; `sin((t'∓t) ln X)/(t'∓t)` takes its limit
/// `ln X` at coincidence.
pub fn kernel_kx(t: f64, tp: f64, x: f64) -> f64 {
    let l = x.ln();
    let a = (0.75 - t * t) * (0.75 - tp * tp);
    let b = 4.0 * t * tp;
    let d = weight_denominator(tp);
    (-(a + b) * sinc_scaled(tp - t, l) - (a - b) * sinc_scaled(tp + t, l)
        + (1.5 + 2.0 * t * tp) * ((tp - t) * l).cos()
        + (1.5 - 2.0 * t * tp) * ((tp + t) * l).cos())
        / d
}

/// `F_X(t) = ∫₁^X Δ̃(x)x^{−5/2}[(3/4 − t²)cos(t ln x) + 2t sin(t ln x)]dx`,
/// integrated in `u = ln x`.
pub fn weighted_delta_integral(t: f64, x: f64, table: &MangoldtTable) -> Result<QuadResult> {
    if !(x >= 2.0) {
        return Err(domain(format!("X must be at least 2, got {x}")));
    }
    if x > table.n_max() as f64 {
        return Err(Error::Coverage { requested: x, available: table.n_max() as f64 });
    }
    let mut coarse: Vec<f64> = table.breakpoints(1.0, x).iter().map(|p| p.ln()).collect();
    coarse[0] = 0.0;
    let points = refine_breakpoints(&coarse, |_| 2.0 * PI / (t.abs().max(1.0) * 8.0));
    let a = 0.75 - t * t;
    chunked_integral(
        |u| {
            let (s, c) = (t * u).sin_cos();
            table.delta_tilde_unchecked(u.exp()) * (-1.5 * u).exp() * (a * c + 2.0 * t * s)
        },
        &points,
        1e-10,
    )
}

/// `H_X(t) = F_X(t) + ln π/2 − ½ Re Γ'/Γ(½ + it)`, stated form.
pub fn h_x(t: f64, x: f64, table: &MangoldtTable) -> Result<f64> {
    Ok(weighted_delta_integral(t, x, table)?.value + 0.5 * LN_PI - 0.5 * digamma_re_half_line(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KxResidual {
    pub sum_k: f64,
    pub h_x: f64,
    /// `Σ_i K_X(t, t_i) − H_X(t)`.
    pub residual: f64,
}

pub fn kx_residual(t: f64, x: f64, catalog: &ZeroCatalog, table: &MangoldtTable) -> Result<KxResidual> {
    let zeros = catalog.ordinates();
    let sum_k: f64 = det_sum(zeros.len(), |i| kernel_kx(t, zeros[i], x));
    let h = h_x(t, x, table)?;
    Ok(KxResidual { sum_k, h_x: h, residual: sum_k - h })
}

/// `J_ε(k)` against two right-hand sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothedTransform {
    /// `∫₀^U e^{−εu}[(3/4−k²)cos ku + 2k sin ku]Δ̃(e^u)e^{−3u/2}du`, `U = ln n_max`.
    pub lhs: f64,
    /// `Re ζ'/ζ(s+ε) + φ_ε(k)` at `s = ½ + ik`, stated form.
    pub rhs: f64,
    /// `Re[−s(s+1)ζ'/ζ(w)/(w(w+1)) − s(s+1)/(2(w−1))]` with `w = s + ε`,
    /// the value of the left side implied by the Dirichlet series.
    pub rhs_exact: f64,
    pub tail: f64,
}

pub fn smoothed_transform_j(k: f64, eps: f64, table: &MangoldtTable) -> Result<SmoothedTransform> {
    if !(eps > 0.5) {
        return Err(Error::Unsupported(format!(
            "eps = {eps}: ζ'/ζ(½ + eps + ik) is only reachable from the Dirichlet series for eps > 1/2"
        )));
    }
    let n_max = table.n_max();
    let u_max = (n_max as f64).ln();
    let s = Complex64::new(0.5, k);
    let w = s + eps;
    let mut coarse: Vec<f64> = table.breakpoints(1.0, n_max as f64).iter().map(|p| p.ln()).collect();
    coarse[0] = 0.0;
    let points = refine_breakpoints(&coarse, |_| 2.0 * PI / (k.abs().max(1.0) * 8.0));
    let a = 0.75 - k * k;
    let lhs = chunked_integral(
        |u| {
            let (sn, cs) = (k * u).sin_cos();
            (-(eps + 1.5) * u).exp() * (a * cs + 2.0 * k * sn) * table.delta_tilde_unchecked(u.exp())
        },
        &points,
        1e-10,
    )?;
    // φ_ε pieces, each as a complex integral in u.
    let tilde_re = chunked_integral(|u| ((-(w + 1.0) * u).exp() * table.delta_tilde_unchecked(u.exp())).re, &points, 1e-10)?;
    let tilde_im = chunked_integral(|u| ((-(w + 1.0) * u).exp() * table.delta_tilde_unchecked(u.exp())).im, &points, 1e-10)?;
    let plain_re = chunked_integral(|u| ((-w * u).exp() * table.delta_unchecked(u.exp())).re, &points, 1e-10)?;
    let plain_im = chunked_integral(|u| ((-w * u).exp() * table.delta_unchecked(u.exp())).im, &points, 1e-10)?;
    let tilde = Complex64::new(tilde_re.value, tilde_im.value);
    let plain = Complex64::new(plain_re.value, plain_im.value);
    let phi_eps = (-s * eps * tilde + eps * plain).re;
    let z = zeta_logderiv_accelerated(w, n_max, table)?;
    let rhs = z.value.re + phi_eps;
    let ss1 = s * (s + 1.0);
    let rhs_exact = (-ss1 * z.value / (w * (w + 1.0)) - ss1 / (2.0 * (w - 1.0))).re;
    // Beyond U the weight is e^{−εU}; |Δ̃(x)|/x^{3/2} stays below 1 there.
    let tail = (-eps * u_max).exp() * (a.abs() + 2.0 * k.abs()) / eps + z.tail_bound;
    Ok(SmoothedTransform { lhs: lhs.value, rhs, rhs_exact, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::build_table;
    use crate::explicit::{guinand_truncated, GuinandVariant};

    #[test]
    fn kernel_f_closed_forms() {
        assert_eq!(kernel_f(0.0, 3.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        let want = (-2.5f64).exp() * (3.75 * 1f64.sin() - 4.0 * 1f64.cos());
        assert!((kernel_f(1.0, e).unwrap() - want).abs() < 1e-15);
        assert_eq!(kernel_f(-2.0, 5.0).unwrap(), -kernel_f(2.0, 5.0).unwrap());
        assert!(kernel_f(1.0, 1.0).is_err());
    }

    #[test]
    fn kernel_f_is_second_derivative_of_phi() {
        for (t, y) in [(3.0, 1.7), (10.0, 25.0)] {
            let h = 1e-4 * y;
            let fd = (phi(t, y + h) - 2.0 * phi(t, y) + phi(t, y - h)) / (h * h);
            assert!((fd - kernel_f(t, y).unwrap()).abs() < 1e-5 * fd.abs().max(1e-3));
        }
    }

    #[test]
    fn kernel_k_closed_forms() {
        for t in [0.3f64, 1.0, 4.0] {
            let want = 2.0 * t.powi(5) - 3.0 * t.powi(3) - 39.0 * t / 8.0;
            assert!((kernel_k(1.0, t) - want).abs() < 1e-12 * want.abs().max(1.0));
        }
        assert_eq!(kernel_k(7.0, 0.0), 0.0);
    }

    #[test]
    fn normalized_kernel_is_minus_dw_dt() {
        let (x, t) = (std::f64::consts::E, 1.0);
        let h = 1e-6;
        let dw = (zero_bracket(t + h, x.ln()) - zero_bracket(t - h, x.ln())) / (2.0 * h);
        assert!((kernel_k_normalized(x, t) + dw).abs() < 1e-8);
    }

    #[test]
    fn boundary_g_at_zero() {
        let table = build_table(100).unwrap();
        assert!((boundary_g(1.5, 0.0, &table, BoundaryConvention::Stated).unwrap() - 1.0).abs() < 1e-15);
        assert!((boundary_g(1.5, 0.0, &table, BoundaryConvention::Corrected).unwrap() + 1.0).abs() < 1e-15);
        assert!(boundary_g(2.5, 1.0, &table, BoundaryConvention::Corrected).is_err());
    }

    #[test]
    fn inverse_map_reproduces_guinand() {
        let table = build_table(100_000).unwrap();
        let y = 1e5;
        let spec = QuadratureSpec::new(y, 8, 1e-9, 1.5).unwrap();
        let t = 10.0;
        let inv = inverse_map(t, &spec, &table).unwrap();
        let endpoint = table.delta_tilde(y).unwrap() * phi_prime(t, y) / PI;
        let g = guinand_truncated(t, y, GuinandVariant::WithLog, &table).unwrap().value / PI;
        assert!((inv.value + endpoint - g).abs() < 1e-8, "{} vs {}", inv.value + endpoint, g);
    }

    #[test]
    fn inverse_map_is_independent_of_a() {
        let table = build_table(10_000).unwrap();
        let vals: Vec<f64> = [1.2, 1.5, 1.8]
            .iter()
            .map(|&a| inverse_map(8.0, &QuadratureSpec::new(1e4, 8, 1e-10, a).unwrap(), &table).unwrap().value)
            .collect();
        assert!((vals[0] - vals[1]).abs() < 2e-10 && (vals[1] - vals[2]).abs() < 2e-10, "{vals:?}");
    }

    #[test]
    fn kx_diagonal_limit() {
        let x: f64 = 100.0;
        let t = 3.0;
        let near = kernel_kx(t, t + 1e-9, x);
        let exact = kernel_kx(t, t, x);
        assert!((near - exact).abs() < 1e-6);
        // First sinc coefficient at t' = t is (3/4 − t²)² + 4t² over the same: 1.
        let d = weight_denominator(t);
        let first = ((0.75 - t * t).powi(2) + 4.0 * t * t) / d;
        assert!((first - 1.0).abs() < 1e-15);
    }

    #[test]
    fn smoothed_transform_requires_eps_above_half() {
        let table = build_table(1000).unwrap();
        assert!(matches!(smoothed_transform_j(1.0, 0.5, &table), Err(Error::Unsupported(_))));
    }
}
