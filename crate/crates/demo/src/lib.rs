//! Browser bindings: the zero staircase, the Guinand reconstruction of
//! πS(T), and Δ̃(x) against its zero sum. Arrays cross the boundary as
//! flat `Float64Array`s.

use std::cell::RefCell;

use wasm_bindgen::prelude::*;
use zexp::arithmetic::{build_table, MangoldtTable};
use zexp::explicit::{delta_tilde_from_zeros, guinand_truncated, GuinandVariant, TruncationPolicy, PSI1_CONSTANT};
use zexp::zeros::{parse_zero_str, ZeroCatalog};

const ZEROS: &str = include_str!("../../core/data/zeros_1000.txt");
/// Largest sieve the page will build.
pub const MAX_X: f64 = 2e6;

thread_local! {
    static CATALOG: ZeroCatalog = parse_zero_str(ZEROS).expect("bundled zero file parses");
    static TABLE: RefCell<Option<MangoldtTable>> = const { RefCell::new(None) };
}

type Res<T> = std::result::Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn js<T>(r: Res<T>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

fn with_table<R>(n: u64, f: impl FnOnce(&MangoldtTable) -> R) -> Res<R> {
    TABLE.with(|cell| {
        let mut slot = cell.borrow_mut();
        if slot.as_ref().map_or(true, |t| t.n_max() < n) {
            *slot = Some(build_table(n.max(1000)).map_err(err)?);
        }
        Ok(f(slot.as_ref().unwrap()))
    })
}

/// Height of the bundled catalog.
#[wasm_bindgen]
pub fn catalog_height() -> f64 {
    CATALOG.with(|c| c.t_max())
}

/// `[T₀, N₀, S₀, T₁, N₁, S₁, …]` on `0..=t_max` with the given step.
#[wasm_bindgen(js_name = staircase)]
pub fn staircase_js(t_max: f64, step: f64) -> Result<Vec<f64>, JsError> {
    js(staircase(t_max, step))
}

pub fn staircase(t_max: f64, step: f64) -> Res<Vec<f64>> {
    if !(step > 0.0) || !(t_max > 0.0) {
        return Err("need t_max > 0 and step > 0".into());
    }
    CATALOG.with(|c| {
        if t_max > c.t_max() {
            return Err(format!("catalog only reaches T = {}", c.t_max()));
        }
        let n = (t_max / step).floor() as usize;
        let mut out = Vec::with_capacity(3 * (n + 1));
        for i in 0..=n {
            let t = i as f64 * step;
            out.extend([t, c.below(t).len() as f64, c.s_right(t)]);
        }
        Ok(out)
    })
}

/// `[X₀, G₀, X₁, G₁, …, πS(T)]`: the Guinand value at `per_decade`
/// log-spaced cutoffs from 10 to `x_max`, then the catalog target.
#[wasm_bindgen(js_name = guinand_sweep)]
pub fn guinand_sweep_js(t: f64, x_max: f64, per_decade: u32) -> Result<Vec<f64>, JsError> {
    js(guinand_sweep(t, x_max, per_decade))
}

pub fn guinand_sweep(t: f64, x_max: f64, per_decade: u32) -> Res<Vec<f64>> {
    if !(x_max >= 10.0 && x_max <= MAX_X) {
        return Err(format!("X must lie in [10, {MAX_X}]"));
    }
    let target = CATALOG.with(|c| c.s_of_t(t)).map_err(err)? * std::f64::consts::PI;
    let steps = ((x_max / 10.0).log10() * per_decade.max(1) as f64).ceil() as usize;
    with_table(x_max.ceil() as u64, |table| {
        let mut out = Vec::with_capacity(2 * steps + 3);
        for i in 0..=steps {
            let x = (10.0 * (x_max / 10.0).powf(i as f64 / steps.max(1) as f64)).min(x_max);
            let g = guinand_truncated(t, x, GuinandVariant::WithLog, table).map_err(err)?;
            out.extend([x, g.value]);
        }
        out.push(target);
        Ok(out)
    })?
}

/// `[x₀, arith₀, zeros₀, x₁, …]` for `x` in `[1, x_max]`, the zero sum using
/// ordinates up to `t_cut` and shifted by the offset constant.
#[wasm_bindgen(js_name = delta_tilde_compare)]
pub fn delta_tilde_compare_js(x_max: f64, t_cut: f64, points: u32) -> Result<Vec<f64>, JsError> {
    js(delta_tilde_compare(x_max, t_cut, points))
}

pub fn delta_tilde_compare(x_max: f64, t_cut: f64, points: u32) -> Res<Vec<f64>> {
    if !(x_max > 1.0 && x_max <= 1e4) {
        return Err("x_max must lie in (1, 1e4]".into());
    }
    let policy = TruncationPolicy::new(2.0 * x_max.max(2.0), t_cut, 50).map_err(err)?;
    let n = points.max(2) as usize;
    CATALOG.with(|c| {
        with_table(x_max.ceil() as u64, |table| {
            let mut out = Vec::with_capacity(3 * n);
            for i in 0..n {
                let x = 1.0 + (x_max - 1.0) * i as f64 / (n - 1) as f64;
                let a = table.delta_tilde(x).map_err(err)?;
                let z = delta_tilde_from_zeros(x.max(1.0 + 1e-9), &policy, c).map_err(err)?;
                out.extend([x, a, z.value + PSI1_CONSTANT]);
            }
            Ok(out)
        })?
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_counts() {
        let s = staircase(30.0, 0.5).unwrap();
        assert_eq!(s.len(), 3 * 61);
        assert_eq!(s[3 * 60 + 1], 3.0);
        assert!(staircase(5000.0, 1.0).is_err());
    }

    #[test]
    fn sweep_ends_near_target() {
        let v = guinand_sweep(10.0, 1e5, 2).unwrap();
        let target = *v.last().unwrap();
        let last = v[v.len() - 2];
        assert!((last - target).abs() < 0.2);
        assert!(guinand_sweep(10.0, 5.0, 2).is_err());
    }

    #[test]
    fn zero_sum_tracks_arithmetic() {
        let v = delta_tilde_compare(50.0, 1400.0, 11).unwrap();
        for row in v.chunks(3) {
            assert!((row[1] - row[2]).abs() < 0.6, "{row:?}");
        }
    }
}
