//! Verification reports and their CSV/JSON encodings.
//!
//! Floats are written in the shortest form that parses back to the same
//! `f64`, so identical runs produce byte-identical files.

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// One identity evaluated from both sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub tail: f64,
    pub wall_time: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    /// Build a report with `residual = lhs − rhs`.
    pub fn new(identity: impl Into<String>, params: &[(&str, f64)], lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::with_residual(identity, params, lhs, rhs, lhs - rhs, tolerance)
    }

    pub fn with_residual(
        identity: impl Into<String>,
        params: &[(&str, f64)],
        lhs: f64,
        rhs: f64,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        VerificationReport {
            identity: identity.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual.is_finite() && residual.abs() <= tolerance,
            tail: 0.0,
            wall_time: 0.0,
            note: None,
        }
    }

    pub fn tail(mut self, tail: f64) -> Self {
        self.tail = tail;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.wall_time = start.elapsed().as_secs_f64();
        self
    }

    /// Replace the tolerance and recompute `pass`.
    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.residual.is_finite() && self.residual.abs() <= tolerance;
        self
    }

    fn param(&self, i: usize) -> String {
        self.params.get(i).map(|(k, v)| format!("{k}={}", fmt_f64(*v))).unwrap_or_default()
    }

    pub fn human(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", fmt_f64(*v))).collect();
        let mut s = format!(
            "[{}] {} ({}): lhs={} rhs={} residual={:.3e} tol={:.3e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.identity,
            params.join(", "),
            fmt_f64(self.lhs),
            fmt_f64(self.rhs),
            self.residual,
            self.tolerance,
        );
        if self.tail != 0.0 {
            let _ = write!(s, " tail={:.3e}", self.tail);
        }
        if let Some(n) = &self.note {
            let _ = write!(s, "  # {n}");
        }
        s
    }
}

pub const REPORT_CSV_HEADER: &str = "identity,param1,param2,lhs,rhs,residual,tail_bound";

/// `identity,param1,param2,lhs,rhs,residual,tail_bound`, one row per report.
pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.identity,
            r.param(0),
            r.param(1),
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.residual),
            fmt_f64(r.tail)
        );
    }
    out
}

pub const RESIDUAL_CSV_HEADER: &str = "equation,point,value_lhs,value_rhs,residual,tail_estimate,params";

/// Row of the integral-system residual table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRow {
    pub equation: String,
    pub point: f64,
    pub value_lhs: f64,
    pub value_rhs: f64,
    pub residual: f64,
    pub tail_estimate: f64,
    pub params: String,
}

pub fn residuals_to_csv(rows: &[ResidualRow]) -> String {
    let mut out = String::from(RESIDUAL_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.equation,
            fmt_f64(r.point),
            fmt_f64(r.value_lhs),
            fmt_f64(r.value_rhs),
            fmt_f64(r.residual),
            fmt_f64(r.tail_estimate),
            r.params
        );
    }
    out
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize infallibly")
}

/// Shortest round-trip decimal form; exponent notation outside
/// `[1e-5, 1e16)`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub(crate) fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_residual() {
        let r = VerificationReport::new("x", &[("T", 1.0)], 1.0, 1.0 + 1e-10, 1e-9);
        assert!(r.pass);
        assert!(!r.tolerance(1e-11).pass);
        let nan = VerificationReport::new("x", &[], f64::NAN, 0.0, 1.0);
        assert!(!nan.pass);
    }

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, 1e-20, 123456.789, -2.5e17, 0.0, 7.832014180505469] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(1e-20), "1e-20");
    }

    #[test]
    fn csv_layout() {
        let r = VerificationReport::new("d_identity", &[("T", 2.0)], 0.0, 0.0, 1e-9).tail(0.25);
        assert_eq!(reports_to_csv(&[r]), format!("{REPORT_CSV_HEADER}\nd_identity,T=2,,0,0,0,0.25\n"));
    }
}
