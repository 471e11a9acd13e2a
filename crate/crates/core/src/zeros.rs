//! Catalogs of zero ordinates and the counting functions N, S, S₁.
//!
//! `N(T)` counts ordinates `t_i <= T`. `S(T) = N(T) − g(T)` is refused at an
//! ordinate, where it jumps by one; with `g(0) = 1` this gives `S(0) = −1`.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::report::fmt_f64;
use crate::zeta::smooth_count_g;

/// Distance from an ordinate below which `S(T)` is treated as a jump query.
pub const JUMP_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCatalog {
    ordinates: Vec<f64>,
    t_max: f64,
    source: String,
}

impl ZeroCatalog {
    /// Validate and wrap a list of ordinates.
    pub fn from_ordinates(ordinates: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if ordinates.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, w) in ordinates.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotone { line: i + 2, previous: w[0], next: w[1] });
            }
        }
        if !(ordinates[0] > 0.0) {
            return Err(Error::Parse { line: 1, message: format!("ordinate {} is not positive", ordinates[0]) });
        }
        let t_max = *ordinates.last().unwrap();
        Ok(ZeroCatalog { ordinates, t_max, source: source.into() })
    }

    /// Raise the declared coverage height above the last ordinate.
    pub fn with_t_max(mut self, t_max: f64) -> Result<Self> {
        let last = *self.ordinates.last().unwrap();
        if !(t_max >= last) {
            return Err(crate::error::domain(format!("t_max {t_max} is below the last ordinate {last}")));
        }
        self.t_max = t_max;
        Ok(self)
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Ordinates `<= t`.
    pub fn below(&self, t: f64) -> &[f64] {
        &self.ordinates[..self.ordinates.partition_point(|&x| x <= t)]
    }

    /// Keep only ordinates `<= t`, with coverage height `t`.
    pub fn truncated(&self, t: f64) -> Result<Self> {
        self.check(t)?;
        let ordinates = self.below(t).to_vec();
        if ordinates.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(ZeroCatalog { ordinates, t_max: t, source: self.source.clone() })
    }

    fn check(&self, t: f64) -> Result<()> {
        if t > self.t_max {
            return Err(Error::Coverage { requested: t, available: self.t_max });
        }
        if t.is_nan() {
            return Err(crate::error::domain("T is NaN"));
        }
        Ok(())
    }

    /// `N(T) = #{t_i <= T}`.
    pub fn count_n(&self, t: f64) -> Result<usize> {
        self.check(t)?;
        Ok(self.below(t).len())
    }

    /// `S(T) = N(T) − g(T)`; errors within `1e-9` of an ordinate.
    pub fn s_of_t(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        if let Some(d) = self.nearest_distance(t) {
            if d < JUMP_EPS {
                return Err(Error::JumpPoint(t));
            }
        }
        Ok(self.s_right(t))
    }

    /// Right-continuous `S` without the jump or coverage checks.
    pub fn s_right(&self, t: f64) -> f64 {
        self.below(t).len() as f64 - smooth_count_g(t)
    }

    /// Distance from `t` to the nearest ordinate.
    pub fn nearest_distance(&self, t: f64) -> Option<f64> {
        let k = self.ordinates.partition_point(|&x| x < t);
        let mut best: Option<f64> = None;
        for j in [k.wrapping_sub(1), k] {
            if let Some(&o) = self.ordinates.get(j) {
                let d = (o - t).abs();
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
        }
        best
    }

    /// `S₁(T) = ∫₀^T S = Σ_{t_i ≤ T}(T − t_i) − ∫₀^T g`.
    pub fn s1_of_t(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        if t <= 0.0 {
            return Ok(0.0);
        }
        let jumps: f64 = self.below(t).iter().map(|&o| t - o).sum();
        let smooth = integral_of_g(t)?;
        Ok(jumps - smooth)
    }

    /// `# source: …` followed by one shortest-form ordinate per line.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# source: {}", self.source);
        for o in &self.ordinates {
            let _ = writeln!(out, "{o}");
        }
        out
    }

    /// CSV with columns `T,N,S,S1`. `S` uses the right limit when a grid
    /// point lands on an ordinate.
    pub fn to_csv(&self, grid: &[f64]) -> Result<String> {
        let mut out = String::from("T,N,S,S1\n");
        for &t in grid {
            let n = self.count_n(t)?;
            let s = self.s_right(t);
            let s1 = self.s1_of_t(t)?;
            let _ = writeln!(out, "{},{},{},{}", fmt_f64(t), n, fmt_f64(s), fmt_f64(s1));
        }
        Ok(out)
    }
}

/// `∫₀^T g(t) dt` to about 1e-10.
pub fn integral_of_g(t: f64) -> Result<f64> {
    let points: Vec<f64> = {
        let n = (t / 20.0).ceil().max(1.0) as usize;
        (0..=n).map(|i| t * i as f64 / n as f64).collect()
    };
    Ok(crate::quadrature::integrate_over(smooth_count_g, &points, Tolerance::new(1e-11, 1e-14))?.value)
}

/// Parse a zero file: one ordinate per line, `#` comments, blank lines
/// ignored. The first comment line (minus a leading `source:`) becomes the
/// catalog's provenance text.
pub fn parse_zero_file<R: Read>(reader: R) -> Result<ZeroCatalog> {
    let reader = BufReader::new(reader);
    let mut source: Option<String> = None;
    let mut ordinates = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse { line: lineno, message: e.to_string() })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if source.is_none() {
                let c = comment.trim();
                source = Some(c.strip_prefix("source:").map(str::trim).unwrap_or(c).to_string());
            }
            continue;
        }
        let v: f64 = trimmed
            .parse()
            .map_err(|_| Error::Parse { line: lineno, message: format!("not a number: {trimmed:?}") })?;
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Parse { line: lineno, message: format!("ordinate {trimmed} is not a positive finite number") });
        }
        if let Some(&prev) = ordinates.last() {
            if v <= prev {
                return Err(Error::NonMonotone { line: lineno, previous: prev, next: v });
            }
        }
        ordinates.push(v);
    }
    if ordinates.is_empty() {
        return Err(Error::EmptyInput);
    }
    ZeroCatalog::from_ordinates(ordinates, source.unwrap_or_default())
}

pub fn parse_zero_str(text: &str) -> Result<ZeroCatalog> {
    parse_zero_file(text.as_bytes())
}

/// Direct quadrature of S over `[0, T]`, split at the ordinates; used to
/// cross-check [`ZeroCatalog::s1_of_t`].
pub fn s1_by_quadrature(catalog: &ZeroCatalog, t: f64) -> Result<f64> {
    let mut points = vec![0.0];
    points.extend(catalog.below(t).iter().copied().filter(|&o| o < t));
    points.push(t);
    let mut total = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let n = catalog.below(0.5 * (a + b)).len() as f64;
        total += integrate(|x| n - smooth_count_g(x), a, b, Tolerance::new(1e-12, 1e-14))?.value;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = include_str!("../data/zeros_100.txt");

    fn fixture() -> ZeroCatalog {
        parse_zero_str(FIXTURE).unwrap()
    }

    #[test]
    fn parse_examples() {
        let c = parse_zero_str("14.134725\n21.022040\n").unwrap();
        assert_eq!(c.ordinates(), &[14.134725, 21.022040]);
        assert_eq!(c.t_max(), 21.022040);
        assert_eq!(parse_zero_str("# c\n\n14.1\n").unwrap().len(), 1);
        match parse_zero_str("14.1\n13.9\n") {
            Err(Error::NonMonotone { line: 2, previous, next }) => assert_eq!((previous, next), (14.1, 13.9)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_zero_str("14.1\nabc\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_zero_str("# only\n\n"), Err(Error::EmptyInput)));
        assert!(matches!(parse_zero_str("-3\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let c = fixture();
        assert_eq!(c.serialize(), FIXTURE);
        assert_eq!(parse_zero_str(&c.serialize()).unwrap(), c);
    }

    #[test]
    fn counting() {
        let c = fixture();
        assert_eq!(c.count_n(0.0).unwrap(), 0);
        assert_eq!(c.count_n(15.0).unwrap(), 1);
        assert_eq!(c.count_n(100.0).unwrap(), 29);
        assert!(matches!(c.count_n(1000.0), Err(Error::Coverage { .. })));
    }

    #[test]
    fn s_values() {
        let c = fixture();
        assert_eq!(c.s_of_t(0.0).unwrap(), -1.0);
        assert!(matches!(c.s_of_t(c.ordinates()[3]), Err(Error::JumpPoint(_))));
        for i in 0..=800 {
            let t = 20.0 + i as f64 * 0.1;
            if let Ok(s) = c.s_of_t(t) {
                assert!(s.abs() <= 2.0, "S({t}) = {s}");
            }
        }
    }

    #[test]
    fn s_jumps_by_one() {
        let c = fixture();
        for &o in &c.ordinates()[..10] {
            let jump = c.s_of_t(o + 1e-7).unwrap() - c.s_of_t(o - 1e-7).unwrap();
            assert!((jump - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn riemann_von_mangoldt_envelope() {
        let c = fixture();
        let mut t = 20.0;
        while t <= c.t_max() {
            let rvm = t / (2.0 * std::f64::consts::PI) * (t / (2.0 * std::f64::consts::PI * std::f64::consts::E)).ln() + 0.875;
            assert!((c.count_n(t).unwrap() as f64 - rvm).abs() <= 2.0, "T = {t}");
            t += 0.25;
        }
    }

    #[test]
    fn s1_two_methods() {
        let c = fixture();
        assert_eq!(c.s1_of_t(0.0).unwrap(), 0.0);
        for t in [10.0, 50.0, 99.0] {
            let a = c.s1_of_t(t).unwrap();
            let b = s1_by_quadrature(&c, t).unwrap();
            assert!((a - b).abs() < 1e-6, "T = {t}: {a} vs {b}");
        }
    }

    #[test]
    fn s1_derivative_is_s() {
        let c = fixture();
        for t in [12.0, 30.5, 77.7] {
            let h = 1e-4;
            let fd = (c.s1_of_t(t + h).unwrap() - c.s1_of_t(t - h).unwrap()) / (2.0 * h);
            assert!((fd - c.s_of_t(t).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let c = fixture();
        let csv = c.to_csv(&[0.0, 15.0]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "T,N,S,S1");
        assert!(lines[1].starts_with("0,0,-1,0"));
        assert!(lines[2].starts_with("15,1,"));
    }
}
