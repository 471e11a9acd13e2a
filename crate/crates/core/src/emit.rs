//! Plot-data series as CSV text, header first, one point per line.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::density::g_trace_csv;
use crate::error::{domain, Error, Result};
use crate::report::{fmt_f64, residuals_to_csv};
use crate::suites::{guinand_csv, guinand_sweep, residual_rows, run_suite, Suite, SuiteInputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    S,
    S1,
    N,
    Delta,
    DeltaTilde,
    GTrace,
    GuinandSweep,
    Residuals,
}

pub const SERIES_NAMES: [&str; 8] = ["S", "S1", "N", "delta", "delta-tilde", "g-trace", "guinand-sweep", "residuals"];

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "S" => Series::S,
            "S1" => Series::S1,
            "N" => Series::N,
            "delta" => Series::Delta,
            "delta-tilde" => Series::DeltaTilde,
            "g-trace" => Series::GTrace,
            "guinand-sweep" => Series::GuinandSweep,
            "residuals" => Series::Residuals,
            other => return Err(domain(format!("unknown series '{other}'; expected one of {}", SERIES_NAMES.join(", ")))),
        })
    }
}

impl Series {
    pub fn needs_zeros(self) -> bool {
        matches!(self, Series::S | Series::S1 | Series::N | Series::GuinandSweep | Series::Residuals)
    }

    pub fn needs_table(self) -> bool {
        !matches!(self, Series::S | Series::S1 | Series::N)
    }
}

/// `lo:hi:step`, inclusive of `hi` when it lands on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl FromStr for Range {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || domain(format!("range '{s}' is not lo:hi:step"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
        if !(v[2] > 0.0) || !(v[1] >= v[0]) {
            return Err(domain(format!("range '{s}' needs step > 0 and hi ≥ lo")));
        }
        Ok(Range { lo: v[0], hi: v[1], step: v[2] })
    }
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

fn default_range(series: Series) -> Range {
    match series {
        Series::S | Series::S1 | Series::N => Range { lo: 0.0, hi: 30.0, step: 0.1 },
        Series::Delta | Series::DeltaTilde => Range { lo: 2.0, hi: 100.0, step: 0.5 },
        _ => Range { lo: 0.0, hi: 12.0, step: 0.01 },
    }
}

pub fn emit_series(series: Series, range: Option<Range>, inputs: &SuiteInputs) -> Result<String> {
    let range = range.unwrap_or_else(|| default_range(series));
    let need = |name: &str| domain(format!("series needs {name}"));
    match series {
        Series::S | Series::S1 | Series::N => {
            let cat = inputs.catalog.ok_or_else(|| need("a zero catalog (--zeros)"))?;
            let (name, col) = match series {
                Series::S => ("S", 2),
                Series::S1 => ("S1", 3),
                _ => ("N", 1),
            };
            let full = cat.to_csv(&range.points())?;
            let mut out = format!("T,{name}\n");
            for line in full.lines().skip(1) {
                let f: Vec<&str> = line.split(',').collect();
                let _ = writeln!(out, "{},{}", f[0], f[col]);
            }
            Ok(out)
        }
        Series::Delta | Series::DeltaTilde => {
            let table = inputs.table.ok_or_else(|| need("a von Mangoldt table (--table or --n-max)"))?;
            let tilde = series == Series::DeltaTilde;
            let mut out = String::from(if tilde { "x,delta_tilde\n" } else { "x,delta\n" });
            for x in range.points() {
                let v = if tilde { table.delta_tilde(x)? } else { table.delta(x)? };
                let _ = writeln!(out, "{},{}", fmt_f64(x), fmt_f64(v));
            }
            Ok(out)
        }
        Series::GTrace => {
            let table = inputs.table.ok_or_else(|| need("a von Mangoldt table (--table or --n-max)"))?;
            g_trace_csv(range.lo, range.hi, range.step, table)
        }
        Series::GuinandSweep => {
            let table = inputs.table.ok_or_else(|| need("a von Mangoldt table (--table or --n-max)"))?;
            let cat = inputs.catalog.ok_or_else(|| need("a zero catalog (--zeros)"))?;
            let ts = inputs.params.t.clone().unwrap_or_else(|| vec![10.0]);
            let xs = inputs.params.x.clone().unwrap_or_else(|| vec![1e3, 1e4, 1e5, 1e6]);
            let mut rows = Vec::new();
            for t in ts {
                rows.extend(guinand_sweep(t, &xs, table, cat)?);
            }
            Ok(guinand_csv(&rows))
        }
        Series::Residuals => {
            let reports = run_suite(Suite::System, inputs)?;
            Ok(residuals_to_csv(&residual_rows(&reports)))
        }
    }
}
