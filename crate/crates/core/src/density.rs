//! Resonance of `g(u) = Δ̃(e^u)e^{−3u/2}` with a single zero, and the
//! lower bound on the measure of `{u : |g(u)| > x}` that follows from it.
//!
//! Everything is in the logarithmic variable `u = ln x`; "horizon" is a
//! length in `u`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::arithmetic::MangoldtTable;
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_over, refine_breakpoints, Tolerance};
use crate::reduce::{map_indexed, pairwise};
use crate::report::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceParams {
    pub t_rho: f64,
    pub theta: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub x_threshold: f64,
    pub horizon: f64,
    pub measure: f64,
    pub bound_rhs: f64,
    pub c1: f64,
    pub c0: f64,
    /// Least-squares slope of the resonance integral over `[2, horizon]`.
    pub slope: f64,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn resonance_params(t_rho: f64) -> Result<ResonanceParams> {
    if !(t_rho > 0.0) {
        return Err(domain(format!("t_rho must be positive, got {t_rho}")));
    }
    let a = 0.75 - t_rho * t_rho;
    let b = 2.0 * t_rho;
    Ok(ResonanceParams { t_rho, theta: (a / b).atan(), amplitude: 1.0 / a.hypot(b) })
}

/// `g(u) = Δ̃(e^u)/e^{3u/2}`; no coverage check.
#[inline]
pub fn g_of_u(u: f64, table: &MangoldtTable) -> f64 {
    table.delta_tilde_unchecked(u.exp()) * (-1.5 * u).exp()
}

fn check_coverage(u: f64, table: &MangoldtTable) -> Result<()> {
    let x = u.exp();
    if x > table.n_max() as f64 {
        return Err(Error::Coverage { requested: x, available: table.n_max() as f64 });
    }
    Ok(())
}

/// Panel edges in `u` on `[lo, hi]`: logs of prime powers, refined to an
/// eighth of the period `2π/t`.
fn u_panels(lo: f64, hi: f64, t: f64, table: &MangoldtTable) -> Vec<f64> {
    let mut pts: Vec<f64> = table.breakpoints(lo.exp(), hi.exp()).iter().map(|p| p.ln()).collect();
    let n = pts.len();
    pts[0] = lo;
    pts[n - 1] = hi;
    pts.retain(|&p| p >= lo && p <= hi);
    pts.dedup();
    refine_breakpoints(&pts, |_| 2.0 * PI / (t.abs().max(1.0) * 8.0))
}

/// `∫₀^U g(u) sin(t_ρ u + θ_ρ) du` at every `U` in the sorted slice.
pub fn resonance_trace(u_points: &[f64], params: &ResonanceParams, table: &MangoldtTable) -> Result<Vec<f64>> {
    let Some(&last) = u_points.last() else { return Ok(Vec::new()) };
    if u_points.iter().any(|&u| u < 0.0) || u_points.windows(2).any(|w| w[1] < w[0]) {
        return Err(domain("horizons must be non-negative and sorted"));
    }
    check_coverage(last, table)?;
    let t = params.t_rho;
    let th = params.theta;
    let f = |u: f64| g_of_u(u, table) * (t * u + th).sin();
    let pieces: Vec<Result<f64>> = map_indexed(u_points.len(), |i| {
        let lo = if i == 0 { 0.0 } else { u_points[i - 1] };
        let hi = u_points[i];
        if hi <= lo {
            return Ok(0.0);
        }
        Ok(integrate_over(f, &u_panels(lo, hi, t, table), Tolerance::abs(1e-12))?.value)
    });
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(pieces.len());
    for p in pieces {
        acc += p?;
        out.push(acc);
    }
    Ok(out)
}

pub fn resonance_integral(u: f64, params: &ResonanceParams, table: &MangoldtTable) -> Result<f64> {
    Ok(resonance_trace(&[u], params, table)?[0])
}

/// Least-squares line `(slope, intercept)` through the points.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = pairwise(x) / n;
    let my = pairwise(y) / n;
    let sxy: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let sxx: Vec<f64> = x.iter().map(|a| (a - mx) * (a - mx)).collect();
    let slope = pairwise(&sxy) / pairwise(&sxx);
    (slope, my - slope * mx)
}

/// Slope of the resonance integral fitted on `n` equally spaced horizons
/// in `[u_lo, u_hi]`.
pub fn resonance_slope(params: &ResonanceParams, u_lo: f64, u_hi: f64, n: usize, table: &MangoldtTable) -> Result<f64> {
    let us: Vec<f64> = (0..n).map(|i| u_lo + (u_hi - u_lo) * i as f64 / (n - 1) as f64).collect();
    let vals = resonance_trace(&us, params, table)?;
    Ok(linear_fit(&us, &vals).0)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..40 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Lower estimate of `C₁ = sup |g(u)|` over `[0, u_max]`: a grid of spacing
/// `step` plus the logs of prime powers, with golden-section refinement
/// around each local maximum.
pub fn sup_estimate_c1(u_max: f64, step: f64, table: &MangoldtTable) -> Result<f64> {
    if !(step > 0.0) || !(u_max >= 0.0) {
        return Err(domain(format!("need step > 0 and u_max ≥ 0, got step={step}, u_max={u_max}")));
    }
    check_coverage(u_max, table)?;
    let n = (u_max / step).ceil() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| (i as f64 * step).min(u_max)).collect();
    grid.extend(table.breakpoints(1.0, u_max.exp()).iter().map(|p| p.ln()).filter(|&u| u < u_max));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let vals: Vec<f64> = map_indexed(grid.len(), |i| g_of_u(grid[i], table).abs());
    let h = |u: f64| g_of_u(u, table).abs();
    let mut best = vals.iter().copied().fold(0.0, f64::max);
    for i in 1..grid.len().saturating_sub(1) {
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] && vals[i] > 0.9 * best {
            best = best.max(golden_max(h, grid[i - 1], grid[i + 1]));
        }
    }
    Ok(best)
}

/// Measure of `{u ∈ (0, horizon) : |g(u)| > x}` on a grid of spacing
/// `step`, with cells that change side located by bisection.
pub fn measure_above(x: f64, horizon: f64, step: f64, table: &MangoldtTable) -> Result<f64> {
    check_coverage(horizon, table)?;
    let n = (horizon / step).ceil() as usize;
    let h = |u: f64| g_of_u(u, table).abs() - x;
    let cells: Vec<f64> = map_indexed(n, |i| {
        let lo = i as f64 * step;
        let hi = ((i + 1) as f64 * step).min(horizon);
        let (flo, fhi) = (h(lo), h(hi));
        match (flo > 0.0, fhi > 0.0) {
            (true, true) => hi - lo,
            (false, false) => 0.0,
            (up_lo, _) => {
                let (mut a, mut b) = (lo, hi);
                for _ in 0..40 {
                    let m = 0.5 * (a + b);
                    if (h(m) > 0.0) == up_lo {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                let cross = 0.5 * (a + b);
                if up_lo { cross - lo } else { hi - cross }
            }
        }
    });
    Ok(pairwise(&cells))
}

pub const MEASURE_STEP: f64 = 1e-3;

/// Empirical measure against `(A−x)/(C₁−x)·H − C₀/(C₁−x)`, with
/// `C₀ = sup_{U≤H} |I(U) − σA·U|` and `σ` the sign of the fitted slope.
pub fn measure_bound_check(x: f64, horizon: f64, params0: &ResonanceParams, table: &MangoldtTable) -> Result<MeasureEstimate> {
    if !(x > 0.0) {
        return Err(domain(format!("threshold must be positive, got {x}")));
    }
    if !(horizon > 2.0) {
        return Err(domain(format!("horizon must exceed 2, got {horizon}")));
    }
    check_coverage(horizon, table)?;
    let a = params0.amplitude;
    let measure = measure_above(x, horizon, MEASURE_STEP, table)?;
    let c1 = sup_estimate_c1(horizon, MEASURE_STEP, table)?;
    let n = (horizon / 0.01).round() as usize;
    let us: Vec<f64> = (1..=n).map(|i| horizon * i as f64 / n as f64).collect();
    let trace = resonance_trace(&us, params0, table)?;
    let fit_from = us.iter().position(|&u| u >= 2.0).unwrap_or(0);
    let slope = linear_fit(&us[fit_from..], &trace[fit_from..]).0;
    let sigma = slope.signum();
    let c0 = us.iter().zip(&trace).map(|(u, v)| (v - sigma * a * u).abs()).fold(0.0, f64::max);
    let bound_rhs = (a - x) / (c1 - x) * horizon - c0 / (c1 - x);
    let note = if x >= a {
        Some(format!("x = {x} ≥ A = {a}: the bound is vacuous"))
    } else if bound_rhs <= 0.0 {
        Some("bound_rhs ≤ 0: horizon too short for a non-trivial bound".to_string())
    } else {
        None
    };
    Ok(MeasureEstimate { x_threshold: x, horizon, measure, bound_rhs, c1, c0, slope, holds: measure >= bound_rhs, note })
}

/// `u,g` rows for plotting.
pub fn g_trace_csv(u_lo: f64, u_hi: f64, step: f64, table: &MangoldtTable) -> Result<String> {
    check_coverage(u_hi, table)?;
    let n = ((u_hi - u_lo) / step).round() as usize;
    let mut out = String::from("u,g\n");
    for i in 0..=n {
        let u = u_lo + i as f64 * step;
        let _ = writeln!(out, "{},{}", fmt_f64(u), fmt_f64(g_of_u(u, table)));
    }
    Ok(out)
}

pub fn measure_csv(rows: &[MeasureEstimate]) -> String {
    let mut out = String::from("x,measure,bound_rhs,C1,C0\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.x_threshold),
            fmt_f64(r.measure),
            fmt_f64(r.bound_rhs),
            fmt_f64(r.c1),
            fmt_f64(r.c0)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::build_table;
    use proptest::prelude::*;

    #[test]
    fn params_reference_values() {
        let p = resonance_params(3f64.sqrt() / 2.0).unwrap();
        assert!(p.theta.abs() < 1e-15);
        assert!((p.amplitude - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        // mpmath, 30 digits
        let p = resonance_params(14.134725).unwrap();
        assert!((p.theta + 1.429_711_272_089_462).abs() < 1e-14);
        assert!((p.amplitude - 0.004_974_184_882_068_688).abs() < 1e-17);
        assert!(resonance_params(0.0).is_err());
    }

    proptest! {
        #[test]
        fn params_invariants(t in 0.01f64..1e3) {
            let p = resonance_params(t).unwrap();
            let d = (0.75 - t * t).powi(2) + 4.0 * t * t;
            prop_assert!((p.amplitude * p.amplitude * d - 1.0).abs() < 1e-13);
            prop_assert!((p.theta.tan() * 2.0 * t - (0.75 - t * t)).abs() < 1e-9 * (1.0 + t * t));
            prop_assert!(p.theta.abs() < PI / 2.0);
        }

        #[test]
        fn amplitude_decreases(t in 1.0f64..500.0, dt in 1e-3f64..10.0) {
            prop_assert!(resonance_params(t + dt).unwrap().amplitude < resonance_params(t).unwrap().amplitude);
        }
    }

    #[test]
    fn sup_below_first_prime() {
        let table = build_table(100).unwrap();
        // g(u) = −e^{u/2}/2 on [0, ln 2].
        let c = sup_estimate_c1(2f64.ln(), 1e-3, &table).unwrap();
        assert!((c - 0.5 * 2f64.sqrt()).abs() < 1e-12, "{c}");
    }

    #[test]
    fn sup_grows_with_density() {
        let table = build_table(100_000).unwrap();
        let coarse = sup_estimate_c1(10.0, 2e-3, &table).unwrap();
        let fine = sup_estimate_c1(10.0, 1e-3, &table).unwrap();
        assert!(fine >= coarse - 1e-15);
    }

    #[test]
    fn resonance_at_zero_horizon() {
        let table = build_table(100).unwrap();
        let p = resonance_params(14.134725).unwrap();
        assert_eq!(resonance_integral(0.0, &p, &table).unwrap(), 0.0);
        assert!(resonance_integral(10.0, &p, &table).is_err());
    }

    #[test]
    fn measure_is_monotone_in_threshold() {
        let table = build_table(100_000).unwrap();
        let a = measure_above(0.01, 8.0, 1e-3, &table).unwrap();
        let b = measure_above(0.05, 8.0, 1e-3, &table).unwrap();
        assert!(a >= b && a <= 8.0 && b >= 0.0);
    }
}
