//! Deterministic floating-point reductions.
//!
//! Index ranges are cut into fixed-size chunks independent of the thread
//! count. Each chunk is summed sequentially, and the chunk partials are
//! combined by a fixed-shape pairwise tree, so the result is bit-identical
//! whether the chunks run on one thread or many.

use std::ops::Add;

/// Number of terms summed sequentially inside one chunk.
pub const CHUNK: usize = 2048;

/// Pairwise (balanced binary tree) sum of a slice with a fixed split rule.
pub fn pairwise<T>(values: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    match values.len() {
        0 => T::default(),
        1 => values[0],
        n => {
            let mid = n / 2;
            pairwise(&values[..mid]) + pairwise(&values[mid..])
        }
    }
}

fn chunk_sum<T, F>(start: usize, end: usize, f: &F) -> T
where
    T: Copy + Default + Add<Output = T>,
    F: Fn(usize) -> T,
{
    let mut acc = T::default();
    for i in start..end {
        acc = acc + f(i);
    }
    acc
}

/// Sum `f(i)` for `i` in `0..len` with a thread-count-independent order.
pub fn det_sum<T, F>(len: usize, f: F) -> T
where
    T: Copy + Default + Send + Sync + Add<Output = T>,
    F: Fn(usize) -> T + Sync + Send,
{
    let n_chunks = len.div_ceil(CHUNK);
    let partials: Vec<T> = map_indexed(n_chunks, |c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(len);
        chunk_sum(start, end, &f)
    });
    pairwise(&partials)
}

/// Evaluate `f(i)` for `i` in `0..len`, preserving order. Runs on the
/// current rayon pool when the `parallel` feature is enabled.
pub fn map_indexed<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Order-preserving map over a slice.
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_indexed(items.len(), |i| f(&items[i]))
}

/// Neumaier-compensated running sum, used for prefix arrays.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_small_integers() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise(&v), 500500.0);
        assert_eq!(pairwise::<f64>(&[]), 0.0);
    }

    #[test]
    fn det_sum_is_reproducible_across_pools() {
        let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
        let a: f64 = det_sum(100_003, f);
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
            let b: f64 = pool.install(|| det_sum(100_003, f));
            assert_eq!(a.to_bits(), b.to_bits());
        }
        let c: f64 = det_sum(100_003, f);
        assert_eq!(a.to_bits(), c.to_bits());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }
}
