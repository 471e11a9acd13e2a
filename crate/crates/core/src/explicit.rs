//! Explicit formulas evaluated from the prime side and the zero side.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::arithmetic::MangoldtTable;
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, integrate_oscillatory, Tolerance};
use crate::reduce::det_sum;
use crate::zeros::ZeroCatalog;
use crate::zeta::{arctan_f1, sine_log_integral, LN_2PI};

/// `ζ'/ζ(−1) = 12 ln A − 1`, the constant term of the classical formula
/// for `Σ_{n≤x} Λ(n)(x − n)`.
pub const PSI1_CONSTANT: f64 = 1.985_053_724_405_411_2;

/// Cutoffs for the prime sum (`x_cut`), the zero sum (`t_max`) and the
/// trivial-zero series (`n_trivial`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationPolicy {
    pub x_cut: f64,
    pub t_max: f64,
    pub n_trivial: usize,
}

impl TruncationPolicy {
    pub fn new(x_cut: f64, t_max: f64, n_trivial: usize) -> Result<Self> {
        if !(x_cut >= 2.0) {
            return Err(domain(format!("X must be at least 2, got {x_cut}")));
        }
        if !(t_max > 0.0) {
            return Err(domain(format!("T_max must be positive, got {t_max}")));
        }
        if n_trivial == 0 {
            return Err(domain("n_trivial must be at least 1"));
        }
        Ok(TruncationPolicy { x_cut, t_max, n_trivial })
    }

    fn check_catalog(&self, catalog: &ZeroCatalog) -> Result<()> {
        if self.t_max > catalog.t_max() {
            return Err(Error::Coverage { requested: self.t_max, available: catalog.t_max() });
        }
        Ok(())
    }
}

/// Which prime weight the Guinand sum carries: `Λ(n)/(√n ln n)` or `Λ(n)/√n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GuinandVariant {
    WithLog,
    WithoutLog,
}

/// `Σ_{n≥1} x^{1−2n}/(2n(2n−1))` for `x >= 1`, summed in closed form as
/// `x·[½(1+y)ln(1+y) + ½(1−y)ln(1−y)]` with `y = 1/x`.
pub fn trivial_series(x: f64) -> f64 {
    let y = 1.0 / x;
    let minus = if y >= 1.0 { 0.0 } else { 0.5 * (1.0 - y) * (-y).ln_1p() };
    x * (0.5 * (1.0 + y) * y.ln_1p() + minus)
}

/// Value of the truncated explicit formula for ζ'/ζ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaEval {
    /// The right-hand side in its stated form.
    #[serde(serialize_with = "crate::report::ser_complex")]
    pub value: Complex64,
    /// `(s+1)·ln 2π·X^{−s} − s·c₀·X^{−s−1}`, contributed by the linear and
    /// constant terms of ψ̃ that the stated form leaves out.
    #[serde(serialize_with = "crate::report::ser_complex")]
    pub normalization_correction: Complex64,
    pub zero_tail: f64,
    pub trivial_tail: f64,
}

impl LemmaEval {
    /// `value + normalization_correction`, the quantity equal to ζ'/ζ(s).
    pub fn corrected(&self) -> Complex64 {
        self.value + self.normalization_correction
    }

    pub fn tail_bound(&self) -> f64 {
        self.zero_tail + self.trivial_tail
    }
}

fn pole_guard(s: Complex64, at: Complex64, what: &str) -> Result<()> {
    if (s - at).norm() < 1e-6 {
        return Err(Error::Pole { what: what.into(), re: s.re, im: s.im });
    }
    Ok(())
}

/// ζ'/ζ(s) rebuilt from `ψ(X)`, `ψ̃(X)`, the zeros up to `T_max`, and
/// `n_trivial` trivial zeros.
pub fn lemma_rhs(s: Complex64, policy: &TruncationPolicy, catalog: &ZeroCatalog, table: &MangoldtTable) -> Result<LemmaEval> {
    policy.check_catalog(catalog)?;
    let x = policy.x_cut;
    if x > table.n_max() as f64 {
        return Err(Error::Coverage { requested: x, available: table.n_max() as f64 });
    }
    pole_guard(s, Complex64::new(1.0, 0.0), "s = 1")?;
    if s.im.abs() < 1e-6 && s.re < 0.0 && (s.re / 2.0 - (s.re / 2.0).round()).abs() < 1e-6 {
        return Err(Error::Pole { what: "trivial zero".into(), re: s.re, im: s.im });
    }
    let zeros = catalog.below(policy.t_max);
    for &t in zeros {
        pole_guard(s, Complex64::new(0.5, t), "nontrivial zero")?;
        pole_guard(s, Complex64::new(0.5, -t), "nontrivial zero")?;
    }
    if s.re > 1.0 && policy.t_max <= 2.0 * s.im.abs() {
        return Err(Error::Truncation { tail: f64::INFINITY, tolerance: 0.0 });
    }

    let ln_x = x.ln();
    let xs = |w: Complex64| (w * ln_x).exp();
    let k = table.count_upto(x);
    let pp = table.prime_powers();
    let logs = table.prime_power_logs();
    let prime_sum: Complex64 = det_sum(k, |i| logs[i] * (-s * (pp[i] as f64).ln()).exp());
    let (psi, n_lambda) = table.prefix(x);
    let psi_tilde = x * psi - n_lambda;
    let ss1 = s * (s + 1.0);

    let mut value = -prime_sum + psi * xs(-s) + s * psi_tilde * xs(-s - 1.0) - ss1 * xs(1.0 - s) / (2.0 * (s - 1.0));

    let zero_sum: Complex64 = det_sum(zeros.len(), |i| {
        let t = zeros[i];
        [Complex64::new(0.5, t), Complex64::new(0.5, -t)]
            .iter()
            .map(|&rho| xs(rho - s) / (rho * (rho + 1.0) * (s - rho)))
            .sum::<Complex64>()
    });
    value += ss1 * zero_sum;

    let mut trivial = Complex64::new(0.0, 0.0);
    for n in 1..=policy.n_trivial {
        let m = 2.0 * n as f64;
        trivial += xs(-m - s) / (m * (m - 1.0) * (s + m));
    }
    value += ss1 * trivial;

    let normalization_correction = (s + 1.0) * LN_2PI * xs(-s) - s * PSI1_CONSTANT * xs(-s - 1.0);

    let t = policy.t_max;
    let zero_tail = 8.0 * ss1.norm() * x.powf(0.5 - s.re) * (2.0 * (t / (2.0 * PI)).ln().max(0.0) + 1.0) / (8.0 * PI * t * t);
    let m = 2.0 * (policy.n_trivial + 1) as f64;
    let first_omitted = ss1.norm() * x.powf(-m - s.re) / (m * (m - 1.0) * (s + m).norm());
    let trivial_tail = first_omitted / (1.0 - x.powi(-2));
    Ok(LemmaEval { value, normalization_correction, zero_tail, trivial_tail })
}

/// Terms of the truncated Guinand formula for `πS(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuinandEval {
    pub value: f64,
    pub prime_sum: f64,
    pub integral: f64,
    pub boundary: f64,
    pub arctan_term: f64,
}

/// `−Σ_{n≤X} w(n) sin(T ln n) + ∫₁^X sin(T ln y)/(√y ln y) dy
///  + Δ(X) sin(T ln X)/(√X ln X) + arctan 2T − π`, an approximation of
/// `πS(T)`, with `w(n) = Λ(n)/(√n ln n)` or `Λ(n)/√n` per `variant`.
pub fn guinand_truncated(t: f64, x: f64, variant: GuinandVariant, table: &MangoldtTable) -> Result<GuinandEval> {
    if !(t > 0.0) {
        return Err(domain(format!("T must be positive, got {t}")));
    }
    if !(x >= 2.0) {
        return Err(domain(format!("X must be at least 2, got {x}")));
    }
    if x > table.n_max() as f64 {
        return Err(Error::Coverage { requested: x, available: table.n_max() as f64 });
    }
    let prime_sum = guinand_prime_sum(t, x, variant, table);
    let integral = sine_log_integral(t, x, Tolerance::new(1e-11, 1e-13))?;
    let ln_x = x.ln();
    let boundary = table.delta_unchecked(x) * (t * ln_x).sin() / (x.sqrt() * ln_x);
    let arctan_term = (2.0 * t).atan() - PI;
    Ok(GuinandEval { value: -prime_sum + integral + boundary + arctan_term, prime_sum, integral, boundary, arctan_term })
}

/// `Σ_{n≤X} w(n) sin(T ln n)` for the given weight.
pub fn guinand_prime_sum(t: f64, x: f64, variant: GuinandVariant, table: &MangoldtTable) -> f64 {
    let k = table.count_upto(x);
    let pp = table.prime_powers();
    let logs = table.prime_power_logs();
    det_sum(k, |i| {
        let n = pp[i] as f64;
        let ln_n = n.ln();
        let w = match variant {
            GuinandVariant::WithLog => logs[i] / (n.sqrt() * ln_n),
            GuinandVariant::WithoutLog => logs[i] / n.sqrt(),
        };
        w * (t * ln_n).sin()
    })
}

/// `−2x^{3/2} Σ_{t_i ≤ T_max} [(3/4−t²)cos(t ln x) + 2t sin(t ln x)]/((3/4−t²)² + 4t²) + f(x)`
/// with `f(x) = −x ln 2π − Σ x^{1−2n}/(2n(2n−1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroSumEval {
    pub value: f64,
    pub tail: f64,
}

/// One zero's bracket `[(3/4−t²)cos(tL) + 2t sin(tL)]/((3/4−t²)² + 4t²)`.
#[inline]
pub fn zero_bracket(t: f64, ln_x: f64) -> f64 {
    let a = 0.75 - t * t;
    let (sn, cs) = (t * ln_x).sin_cos();
    (a * cs + 2.0 * t * sn) / (a * a + 4.0 * t * t)
}

/// Bound on `Σ_{t_i > T} 2/t_i²`: the smooth density `(1/2π)ln(t/2π)`
/// gives `(ln(T/2π) + 1)/(πT)`; partial summation against
/// `|N(t) − N_smooth(t)| ≤ 0.137 ln t + 0.443 ln ln t + 4.35` adds `4E(T)/T²`.
pub fn zero_tail_sum_inverse_square(t: f64) -> f64 {
    let t = t.max(std::f64::consts::E);
    let e = 0.137 * t.ln() + 0.443 * t.ln().ln() + 4.35;
    ((t / (2.0 * PI)).ln().max(0.0) + 1.0) / (PI * t) + 4.0 * e / (t * t)
}

/// The trivial-zero series is summed in closed form, so `n_trivial` does
/// not enter here.
pub fn delta_tilde_from_zeros(x: f64, policy: &TruncationPolicy, catalog: &ZeroCatalog) -> Result<ZeroSumEval> {
    if !(x > 1.0) {
        return Err(domain(format!("x must exceed 1, got {x}")));
    }
    policy.check_catalog(catalog)?;
    let zeros = catalog.below(policy.t_max);
    let ln_x = x.ln();
    let sum: f64 = det_sum(zeros.len(), |i| zero_bracket(zeros[i], ln_x));
    let x32 = x * x.sqrt();
    let value = -2.0 * x32 * sum - x * LN_2PI - trivial_series(x);
    let tail = x32 * zero_tail_sum_inverse_square(policy.t_max);
    Ok(ZeroSumEval { value, tail })
}

/// Mean of `lhs − rhs` and the largest deviation from it.
pub fn fit_constant(lhs: &[f64], rhs: &[f64]) -> (f64, f64) {
    let n = lhs.len().min(rhs.len());
    if n == 0 {
        return (0.0, 0.0);
    }
    let d: Vec<f64> = lhs.iter().zip(rhs).map(|(a, b)| a - b).collect();
    let c = d.iter().sum::<f64>() / n as f64;
    let spread = d.iter().map(|r| (r - c).abs()).fold(0.0, f64::max);
    (c, spread)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffsetFit {
    pub c: f64,
    pub spread: f64,
    pub limit: f64,
    pub points: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// Least-squares constant `c` in `Δ̃_arith(x) ≈ Δ̃_zeros(x) + c`.
pub fn offset_fit(x_grid: &[f64], policy: &TruncationPolicy, catalog: &ZeroCatalog, table: &MangoldtTable) -> Result<OffsetFit> {
    if x_grid.len() < 20 {
        return Err(domain(format!("offset fit needs at least 20 points, got {}", x_grid.len())));
    }
    for &x in x_grid {
        if !(2.0..=0.5 * policy.x_cut).contains(&x) {
            return Err(domain(format!("grid point {x} outside [2, X/2] = [2, {}]", 0.5 * policy.x_cut)));
        }
    }
    let mut arith = Vec::with_capacity(x_grid.len());
    let mut zeros = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        arith.push(table.delta_tilde(x)?);
        zeros.push(delta_tilde_from_zeros(x, policy, catalog)?.value);
    }
    let (c, spread) = fit_constant(&arith, &zeros);
    let mut scale: Vec<f64> = x_grid.iter().map(|x| x * x.sqrt()).collect();
    scale.sort_by(f64::total_cmp);
    let median = if scale.len() % 2 == 1 {
        scale[scale.len() / 2]
    } else {
        0.5 * (scale[scale.len() / 2 - 1] + scale[scale.len() / 2])
    };
    let limit = 0.1 * median;
    if spread > limit {
        return Err(Error::FitRejected { spread, limit });
    }
    let residuals = arith.iter().zip(&zeros).map(|(a, z)| a - z - c).collect();
    Ok(OffsetFit { c, spread, limit, points: x_grid.to_vec(), residuals })
}

/// `Im ∫₂^{½+iT} X^{1−s}/(1−s) ds` along a path passing above `s = 1`,
/// by three routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourEval {
    /// `f₁(T, X) − π`.
    pub value: f64,
    /// `f₂(T, X) + arctan 2T − π`.
    pub via_f2: f64,
    /// Direct quadrature along `2 → 2+iT → ½+iT` (absent for `T < 0.25`).
    pub direct: Option<f64>,
}

pub fn im_contour_term(t: f64, x: f64) -> Result<ContourEval> {
    if !(t >= 0.0) || !(x > 1.0) {
        return Err(domain(format!("need T >= 0 and X > 1, got T = {t}, X = {x}")));
    }
    let tol = Tolerance::new(1e-11, 1e-13);
    let f1 = arctan_f1(t, x, Tolerance::new(1e-11 / x.sqrt(), 1e-13))?;
    let f2 = sine_log_integral(t, x, tol)?;
    let direct = if t >= 0.25 { Some(contour_direct(t, x)?) } else { None };
    Ok(ContourEval { value: f1 - PI, via_f2: f2 + (2.0 * t).atan() - PI, direct })
}

fn contour_direct(t: f64, x: f64) -> Result<f64> {
    let l = x.ln();
    let g = |s: Complex64| ((1.0 - s) * l).exp() / (1.0 - s);
    let tol = Tolerance::new(1e-12, 1e-13);
    let vertical = integrate_oscillatory(|u| (Complex64::i() * g(Complex64::new(2.0, u))).im, 0.0, t, l.max(1.0), 8, tol)?;
    let horizontal = integrate(|sig| g(Complex64::new(sig, t)).im, 2.0, 0.5, Tolerance::new(1e-12 * x.sqrt(), 1e-13))?;
    Ok(vertical.value + horizontal.value)
}

/// Both sides of the weighted transform of `f_X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformCheck {
    /// `∫₀^{T_cut} 4(s−1)t/((s−½)²+t²)² f_X(t) dt`.
    pub lhs: f64,
    /// `−Σ Λ(n)n^{−s} + Δ(X)/(X^{s+½} ln X) + (X^{1−s} − 1)/(1−s)`.
    pub rhs: f64,
    /// Closed form obtained from `∫₀^∞ t sin(at)/(b²+t²)² dt = πa e^{−ab}/(4b)`:
    /// `π(s−1)/(s−½)·[−Σ Λ(n) ln n·n^{−s} + Δ(X)X^{−s} + (X^{1−s} − 1)/(1−s)]`.
    pub rhs_exact: f64,
    pub t_cut: f64,
    pub tail: f64,
}

/// `f_X(t) = −Σ_{n≤X} Λ(n) sin(t ln n)/√n + Δ(X) sin(t ln X)/(√X ln X) + f₂(t, X)`.
pub fn transform_fx(t: f64, x: f64, table: &MangoldtTable) -> f64 {
    let ln_x = x.ln();
    -guinand_prime_sum(t, x, GuinandVariant::WithoutLog, table)
        + table.delta_unchecked(x) * (t * ln_x).sin() / (x.sqrt() * ln_x)
        + crate::zeta::sine_log_integral_closed(t, x)
}

fn transform_weight(s: f64, t: f64) -> f64 {
    let b = s - 0.5;
    let d = b * b + t * t;
    4.0 * (s - 1.0) * t / (d * d)
}

pub fn inverse_transform_check(s: f64, x: f64, table: &MangoldtTable, tol: f64) -> Result<TransformCheck> {
    if !(s > 1.0) {
        return Err(domain(format!("the transform check needs real s > 1, got {s}")));
    }
    if !(x >= 2.0) || x > table.n_max() as f64 {
        return Err(Error::Coverage { requested: x, available: table.n_max() as f64 });
    }
    let k = table.count_upto(x);
    let bound: f64 = table.prime_power_logs()[..k]
        .iter()
        .zip(table.prime_powers())
        .map(|(l, &n)| l / (n as f64).sqrt())
        .sum::<f64>()
        + table.delta_unchecked(x).abs() / x.sqrt()
        + 2.0 * x.sqrt();
    let t_cut = (2.0 * (s - 1.0) * bound / tol).sqrt();
    let tail = 2.0 * (s - 1.0) * bound / (t_cut * t_cut);
    let ln_x = x.ln();
    let lhs = integrate_oscillatory(
        |t| transform_weight(s, t) * transform_fx(t, x, table),
        0.0,
        t_cut,
        ln_x,
        8,
        Tolerance::new(0.1 * tol, 0.0),
    )?;

    let pp = &table.prime_powers()[..k];
    let logs = &table.prime_power_logs()[..k];
    let mut plain = 0.0;
    let mut weighted = 0.0;
    for (l, &n) in logs.iter().zip(pp) {
        let nf = n as f64;
        let term = l * nf.powf(-s);
        plain += term;
        weighted += term * nf.ln();
    }
    let delta = table.delta_unchecked(x);
    let smooth = (x.powf(1.0 - s) - 1.0) / (1.0 - s);
    let rhs = -plain + delta / (x.powf(s + 0.5) * ln_x) + smooth;
    let rhs_exact = PI * (s - 1.0) / (s - 0.5) * (-weighted + delta * x.powf(-s) + smooth);
    Ok(TransformCheck { lhs: lhs.value, rhs, rhs_exact, t_cut, tail: tail + lhs.error })
}

/// `∫₀^∞ 4(s−1)t/((s−½)²+t²)²·sin(t ln n)/√n dt` by quadrature, against the
/// stated value `n^{−s}` and the exact value `π(s−1) ln n·n^{−s}/(s−½)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidueComponent {
    pub quadrature: f64,
    pub stated: f64,
    pub exact: f64,
    pub tail: f64,
}

pub fn residue_component(s: f64, n: u64) -> Result<ResidueComponent> {
    if !(s > 0.5) || n < 2 {
        return Err(domain(format!("need s > 1/2 and n >= 2, got s = {s}, n = {n}")));
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let t_cut = 2e4;
    let tail = 2.0 * (s - 1.0).abs() / (nf.sqrt() * t_cut * t_cut);
    let r = integrate_oscillatory(
        |t| transform_weight(s, t) * (t * ln_n).sin() / nf.sqrt(),
        0.0,
        t_cut,
        ln_n,
        8,
        Tolerance::new(1e-12, 0.0),
    )?;
    Ok(ResidueComponent {
        quadrature: r.value,
        stated: nf.powf(-s),
        exact: PI * (s - 1.0) * ln_n * nf.powf(-s) / (s - 0.5),
        tail: tail + r.error,
    })
}
