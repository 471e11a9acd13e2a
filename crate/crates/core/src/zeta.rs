//! ζ'/ζ from its Dirichlet series, the smooth zero-counting term g(t), and
//! the closed-form Γ identities used in the Guinand derivation.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::arithmetic::MangoldtTable;
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_oscillatory, Tolerance};
use crate::reduce::det_sum;
use crate::special::{arg_gamma_quarter, digamma_re_quarter_line, gudermannian, ln_gamma};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// `ln π`.
pub const LN_PI: f64 = 1.144_729_885_849_400_2;
/// `ln 2π`.
pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

// Rosser–Schoenfeld: ψ(x) < 1.03883 x for all x > 0.
const PSI_RATIO_BOUND: f64 = 1.038_83;

/// A truncated series value and a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    #[serde(serialize_with = "crate::report::ser_complex")]
    pub value: Complex64,
    pub tail_bound: f64,
}

fn dirichlet_partial(s: Complex64, n_max: u64, table: &MangoldtTable) -> Result<Complex64> {
    if n_max > table.n_max() {
        return Err(Error::Coverage { requested: n_max as f64, available: table.n_max() as f64 });
    }
    let k = table.count_upto(n_max as f64);
    let pp = table.prime_powers();
    let logs = table.prime_power_logs();
    let sum: Complex64 = det_sum(k, |i| {
        let ln_n = (pp[i] as f64).ln();
        logs[i] * (-s * ln_n).exp()
    });
    Ok(-sum)
}

/// `−Σ_{n≤n_max} Λ(n) n^{−s}` for `Re s > 1`, with the bound
/// `1.03883·σ·N^{1−σ}/(σ−1)` on the omitted terms.
pub fn zeta_logderiv_dirichlet(s: Complex64, n_max: u64, table: &MangoldtTable) -> Result<SeriesValue> {
    if !(s.re > 1.0) {
        return Err(domain(format!("Dirichlet series for ζ'/ζ needs Re s > 1, got {s}")));
    }
    let value = dirichlet_partial(s, n_max, table)?;
    let sigma = s.re;
    let tail_bound = PSI_RATIO_BOUND * sigma * (n_max as f64).powf(1.0 - sigma) / (sigma - 1.0);
    Ok(SeriesValue { value, tail_bound })
}

/// Dirichlet series with the smooth part of the tail added back in closed
/// form: `Σ_{n>N} Λ(n)n^{−s} ≈ N^{1−s}/(s−1) − Δ(N)N^{−s}`. The reported
/// bound assumes `|Δ(x)| ≤ √x·ln²x/(8π)`.
pub fn zeta_logderiv_accelerated(s: Complex64, n_max: u64, table: &MangoldtTable) -> Result<SeriesValue> {
    if !(s.re > 0.5) || (s - 1.0).norm() < 1e-6 {
        return Err(domain(format!("accelerated series needs Re s > 1/2 and s ≠ 1, got {s}")));
    }
    let partial = dirichlet_partial(s, n_max, table)?;
    let n = n_max as f64;
    let ln_n = n.ln();
    let delta = table.delta_unchecked(n);
    let smooth_tail = (-(s - 1.0) * ln_n).exp() / (s - 1.0) - delta * (-s * ln_n).exp();
    let value = partial - smooth_tail;
    let tail_bound = s.norm() * n.powf(0.5 - s.re) * ln_n * ln_n / (8.0 * PI * (s.re - 0.5));
    Ok(SeriesValue { value, tail_bound })
}

/// `g(t) = 1 − t·ln π/(2π) + arg Γ(1/4 + it/2)/π`, the smooth part of N(t).
pub fn smooth_count_g(t: f64) -> f64 {
    1.0 - t * LN_PI / (2.0 * PI) + arg_gamma_quarter(t) / PI
}

/// `g'(t) = −ln π/(2π) + Re ψ(1/4 + it/2)/(2π)`.
pub fn smooth_count_g_derivative(t: f64) -> f64 {
    (-LN_PI + digamma_re_quarter_line(t)) / (2.0 * PI)
}

/// `½ arg Γ(½+iT) − arg Γ(¼+iT/2) − T ln2/2 − ¼ arctan(sinh πT)`, which
/// vanishes identically for `T > 0`.
pub fn d_identity(t: f64) -> f64 {
    let a = ln_gamma(Complex64::new(0.5, t)).map(|c| c.im).unwrap_or(f64::NAN);
    0.5 * a - arg_gamma_quarter(t) - 0.5 * t * LN_2 - 0.25 * gudermannian(PI * t)
}

/// `Γ²(1−z)Γ⁴(z/2) sin²(πz/2) / (Γ²(z)Γ⁴(½−z/2) 4^{1−2z} cos²(πz/2))`,
/// identically 1. Integer `z` (within 1e-6) hits a pole or zero of one of
/// the factors and is refused.
pub fn f_identity(z: Complex64) -> Result<Complex64> {
    let nearest = z.re.round();
    if (z - nearest).norm() < 1e-6 {
        return Err(Error::Pole { what: "f(z) factor".into(), re: z.re, im: z.im });
    }
    let half_pi_z = z * (PI / 2.0);
    let log_f = 2.0 * ln_gamma(1.0 - z)? + 4.0 * ln_gamma(z / 2.0)?
        - 2.0 * ln_gamma(z)?
        - 4.0 * ln_gamma(0.5 - z / 2.0)?
        - (1.0 - 2.0 * z) * (2.0 * LN_2)
        + 2.0 * half_pi_z.tan().ln();
    Ok(log_f.exp())
}

#[inline]
fn sin_over_u(freq: f64, u: f64) -> f64 {
    let x = freq * u;
    if x.abs() < 1e-4 {
        freq * (1.0 - x * x / 6.0)
    } else {
        x.sin() / u
    }
}

/// `f₂(T, X) = ∫₁^X sin(T ln y)/(√y ln y) dy = ∫₀^{ln X} e^{u/2} sin(Tu)/u du`
/// by oscillation-aware quadrature.
pub fn sine_log_integral(t: f64, x: f64, tol: Tolerance) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(domain(format!("X must be at least 1, got {x}")));
    }
    let l = x.ln();
    let r = integrate_oscillatory(|u| (0.5 * u).exp() * sin_over_u(t, u), 0.0, l, t.abs().max(1.0), 8, tol)?;
    Ok(r.value)
}

/// `Ein(w) = ∫₀^w (1 − e^{−v})/v dv`, entire.
pub fn ein(w: Complex64) -> Complex64 {
    let r = w.norm();
    if r < 4.0 || r + w.re.min(0.0) <= 14.0 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 1..400 {
            term *= w / k as f64;
            let add = term / k as f64;
            if k % 2 == 1 {
                sum += add;
            } else {
                sum -= add;
            }
            if add.norm() < 1e-18 * sum.norm() && k as f64 > r {
                break;
            }
        }
        sum
    } else {
        e1_continued_fraction(w) + w.ln() + EULER_GAMMA
    }
}

// E₁(w) = e^{−w} / (w + 1 − 1²/(w + 3 − 2²/(w + 5 − …))), modified Lentz.
fn e1_continued_fraction(w: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = w + 1.0;
    if f.norm() == 0.0 {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..20_000 {
        let a = -((k * k) as f64);
        let b = w + (2 * k + 1) as f64;
        d = b + a * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-w).exp() / f
}

/// `f₂(t, X)` in closed form: `−Im Ein(−(½+it) ln X)`.
pub fn sine_log_integral_closed(t: f64, x: f64) -> f64 {
    let z = Complex64::new(0.5, t);
    -ein(-z * x.ln()).im
}

/// `f₁(T, X) = √X ∫₀^T [2cos(t ln X) + 4t sin(t ln X)]/(1 + 4t²) dt`.
pub fn arctan_f1(t_max: f64, x: f64, tol: Tolerance) -> Result<f64> {
    let l = x.ln();
    let r = integrate_oscillatory(
        |t| (2.0 * (t * l).cos() + 4.0 * t * (t * l).sin()) / (1.0 + 4.0 * t * t),
        0.0,
        t_max,
        l.max(t_max).max(1.0) * 2.0,
        8,
        tol,
    )?;
    Ok(x.sqrt() * r.value)
}

/// `(f₁, f₂, f₁ − f₂ − arctan 2T)`; the third entry vanishes.
pub fn arctan_relation(t: f64, x: f64) -> Result<(f64, f64, f64)> {
    if !(t >= 0.0) || !(x > 1.0) {
        return Err(domain(format!("need T >= 0 and X > 1, got T = {t}, X = {x}")));
    }
    let tol = Tolerance::new(1e-11, 1e-13);
    let f1 = arctan_f1(t, x, Tolerance::new(1e-11 / x.sqrt(), 1e-13))?;
    let f2 = sine_log_integral(t, x, tol)?;
    Ok((f1, f2, f1 - f2 - (2.0 * t).atan()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::build_table;

    #[test]
    fn dirichlet_values() {
        let t = build_table(100_000).unwrap();
        let r = zeta_logderiv_dirichlet(Complex64::new(2.0, 0.0), 100_000, &t).unwrap();
        assert!((r.value.re + 0.569_960_993_094_532_8).abs() <= r.tail_bound);
        assert!((r.value.re + 0.569_961).abs() < 1e-4);
        let r3 = zeta_logderiv_dirichlet(Complex64::new(3.0, 0.0), 10_000, &t).unwrap();
        assert!((r3.value.re + 0.164_822_682_158_277_24).abs() <= r3.tail_bound);
    }

    #[test]
    fn dirichlet_conjugate_symmetry() {
        let t = build_table(10_000).unwrap();
        let a = zeta_logderiv_dirichlet(Complex64::new(2.0, 3.0), 10_000, &t).unwrap().value;
        let b = zeta_logderiv_dirichlet(Complex64::new(2.0, -3.0), 10_000, &t).unwrap().value;
        assert_eq!(a, b.conj());
    }

    #[test]
    fn dirichlet_tail_bound_honored() {
        let t = build_table(200_000).unwrap();
        for s in [Complex64::new(1.5, 0.0), Complex64::new(2.0, 7.0), Complex64::new(3.0, -1.0)] {
            let a = zeta_logderiv_dirichlet(s, 100_000, &t).unwrap();
            let b = zeta_logderiv_dirichlet(s, 200_000, &t).unwrap();
            assert!((a.value - b.value).norm() < a.tail_bound);
        }
    }

    #[test]
    fn dirichlet_domain() {
        let t = build_table(100).unwrap();
        assert!(matches!(zeta_logderiv_dirichlet(Complex64::new(1.0, 2.0), 100, &t), Err(Error::Domain(_))));
        assert!(matches!(zeta_logderiv_dirichlet(Complex64::new(2.0, 0.0), 101, &t), Err(Error::Coverage { .. })));
    }

    #[test]
    fn accelerated_series_converges_below_one() {
        // ζ'/ζ(1.3 + 5i), reference from a high-precision evaluation.
        let t = build_table(1_000_000).unwrap();
        let s = Complex64::new(1.3, 5.0);
        let r = zeta_logderiv_accelerated(s, 1_000_000, &t).unwrap();
        let want = Complex64::new(0.098_245_287_157_713_32, -0.128_037_809_839_627_88);
        assert!((r.value - want).norm() < 1e-4, "{}", r.value);
        assert!((r.value - want).norm() < r.tail_bound);
    }

    #[test]
    fn g_values() {
        assert_eq!(smooth_count_g(0.0), 1.0);
        let t = 50.0;
        let stirling = t / (2.0 * PI) * (t / (2.0 * PI * std::f64::consts::E)).ln() + 0.875;
        assert!((smooth_count_g(t) - stirling).abs() < 1e-3);
    }

    #[test]
    fn g_derivative_matches_difference() {
        for t in [0.5, 3.0, 14.0, 60.0] {
            let h = 1e-5;
            let fd = (smooth_count_g(t + h) - smooth_count_g(t - h)) / (2.0 * h);
            assert!((fd - smooth_count_g_derivative(t)).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn d_identity_vanishes() {
        for t in [0.1, 1.0, 10.0, 50.0] {
            assert!(d_identity(t).abs() < 1e-9, "T = {t}: {}", d_identity(t));
        }
    }

    #[test]
    fn f_identity_is_one() {
        for z in [Complex64::new(0.5, 0.0), Complex64::new(0.3, 2.0), Complex64::new(-1.2, 0.7)] {
            assert!((f_identity(z).unwrap() - 1.0).norm() < 1e-9, "{z}");
        }
        assert!(matches!(f_identity(Complex64::new(2.0 + 1e-8, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn sine_log_integral_reference() {
        // (T, X, value) from arbitrary-precision quadrature.
        let cases = [
            (5.0, 100.0, 1.870_179_363_847_908_7),
            (20.0, 1e4, 1.828_541_716_716_207_8),
            (0.1, 1e6, 155.499_659_334_040_6),
            (2.0, 2e4, -1.014_530_850_705_828_2),
            (50.0, 1e6, 0.229_240_462_812_340_5),
            (10.0, 1e5, 2.942_177_335_126_193_6),
        ];
        for (t, x, want) in cases {
            let q = sine_log_integral(t, x, Tolerance::new(1e-12, 1e-14)).unwrap();
            let c = sine_log_integral_closed(t, x);
            assert!((q - want).abs() < 1e-10 * want.abs().max(1.0), "quad {t} {x}: {q}");
            assert!((c - want).abs() < 1e-8 * want.abs().max(1.0), "closed {t} {x}: {c}");
        }
    }

    #[test]
    fn ein_branches_agree() {
        for (re, im) in [(-5.0, -12.0), (-2.0, -13.0), (3.0, 12.0), (-6.0, -9.0)] {
            let w = Complex64::new(re, im);
            let series = {
                let mut term = Complex64::new(1.0, 0.0);
                let mut sum = Complex64::new(0.0, 0.0);
                for k in 1..200 {
                    term *= w / k as f64;
                    sum += term / k as f64 * if k % 2 == 1 { 1.0 } else { -1.0 };
                }
                sum
            };
            let cf = e1_continued_fraction(w) + w.ln() + EULER_GAMMA;
            assert!((series - cf).norm() < 1e-8 * series.norm().max(1.0), "{w}");
        }
    }

    #[test]
    fn arctan_relation_small_grid() {
        let (f1, f2, r) = arctan_relation(0.0, 50.0).unwrap();
        assert_eq!((f1, f2, r), (0.0, 0.0, 0.0));
        assert!(arctan_relation(5.0, 100.0).unwrap().2.abs() < 1e-6);
        assert!(arctan_relation(20.0, 1e4).unwrap().2.abs() < 1e-5);
    }
}
