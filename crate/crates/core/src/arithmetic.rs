//! The von Mangoldt function and the Chebyshev functions built on it.
//!
//! Endpoint convention: every cumulative function in this crate sums over
//! `n <= x` (closed endpoint). Jump points have measure zero in every
//! integral that consumes these functions.
//!
//! `ψ̃(x) = Σ_{n≤x} Λ(n)(x − n)` is evaluated as `x·ψ(x) − Σ_{n≤x} nΛ(n)`
//! from prefix arrays indexed by prime power, so a query costs one binary
//! search.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::reduce::CompensatedSum;

const SEGMENT: usize = 1 << 16;
const CACHE_MAGIC: &[u8; 4] = b"ZEXP";
pub const CACHE_VERSION: u32 = 1;

/// Λ(n): `log p` when `n = p^k`, zero otherwise.
pub fn von_mangoldt(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(domain("von_mangoldt is undefined at n = 0"));
    }
    if n == 1 {
        return Ok(0.0);
    }
    let mut p = 0u64;
    if n % 2 == 0 {
        p = 2;
    } else {
        let mut d = 3u64;
        while d.saturating_mul(d) <= n {
            if n % d == 0 {
                p = d;
                break;
            }
            d += 2;
        }
        if p == 0 {
            p = n;
        }
    }
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    Ok(if m == 1 { (p as f64).ln() } else { 0.0 })
}

/// Limits applied while sieving.
#[derive(Debug, Clone, Copy)]
pub struct SieveConfig {
    /// Upper bound on bytes held by the finished table.
    pub memory_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { memory_budget: 4 << 30 }
    }
}

/// Sieved Λ(n) for `1 <= n <= n_max`, immutable once built.
#[derive(Debug, Clone)]
pub struct MangoldtTable {
    n_max: u64,
    values: Vec<f64>,
    powers: Vec<u64>,
    logs: Vec<f64>,
    cum_psi: Vec<f64>,
    cum_n_lambda: Vec<f64>,
    checksum: u64,
}

/// ψ, ψ̃ and their deviations at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChebyshevSample {
    pub x: f64,
    pub psi: f64,
    pub psi_tilde: f64,
    pub delta: f64,
    pub delta_tilde: f64,
}

fn estimated_bytes(n_max: u64) -> u64 {
    let n = n_max.max(2) as f64;
    let powers = 1.3 * n / n.ln() + 16.0;
    (n_max + 1) * 8 + (powers as u64) * 32
}

fn small_primes(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn sieve_segment(chunk: &mut [f64], lo: u64, base: &[u64]) {
    let hi = lo + chunk.len() as u64;
    let mut composite = vec![false; chunk.len()];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut m = (p * p).max(lo.div_ceil(p) * p);
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    for (i, slot) in chunk.iter_mut().enumerate() {
        let n = lo + i as u64;
        if n >= 2 && !composite[i] {
            *slot = (n as f64).ln();
        }
    }
}

fn fnv1a(n_max: u64, values: &[f64]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let mut feed = |bytes: [u8; 8]| {
        for b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    feed(n_max.to_le_bytes());
    for v in values {
        feed(v.to_bits().to_le_bytes());
    }
    h
}

/// Sieve Λ on `[1, n_max]` with the default memory budget.
pub fn build_table(n_max: u64) -> Result<MangoldtTable> {
    build_table_with(n_max, &SieveConfig::default())
}

/// Segmented sieve: each segment is marked with a buffer of its own size,
/// and segments run in parallel on disjoint slices of the output.
pub fn build_table_with(n_max: u64, config: &SieveConfig) -> Result<MangoldtTable> {
    if n_max < 2 {
        return Err(domain(format!("n_max must be at least 2, got {n_max}")));
    }
    let need = estimated_bytes(n_max);
    if need > config.memory_budget {
        return Err(Error::Resource(format!(
            "n_max = {n_max} needs about {need} bytes, over the memory budget of {} bytes",
            config.memory_budget
        )));
    }
    let root = isqrt(n_max);
    let base = small_primes(root as usize);
    let mut values = vec![0.0f64; (n_max + 1) as usize];

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        values
            .par_chunks_mut(SEGMENT)
            .enumerate()
            .for_each(|(c, chunk)| sieve_segment(chunk, (c * SEGMENT) as u64, &base));
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (c, chunk) in values.chunks_mut(SEGMENT).enumerate() {
            sieve_segment(chunk, (c * SEGMENT) as u64, &base);
        }
    }

    for &p in &base {
        let lp = (p as f64).ln();
        let mut q = p * p;
        loop {
            values[q as usize] = lp;
            match q.checked_mul(p) {
                Some(next) if next <= n_max => q = next,
                _ => break,
            }
        }
    }
    Ok(MangoldtTable::from_values(n_max, values))
}

impl MangoldtTable {
    fn from_values(n_max: u64, values: Vec<f64>) -> Self {
        let mut powers = Vec::new();
        let mut logs = Vec::new();
        let mut cum_psi = Vec::new();
        let mut cum_n_lambda = Vec::new();
        let mut psi = CompensatedSum::default();
        let mut n_lambda = CompensatedSum::default();
        for (n, &v) in values.iter().enumerate() {
            if v != 0.0 {
                psi.add(v);
                n_lambda.add(n as f64 * v);
                powers.push(n as u64);
                logs.push(v);
                cum_psi.push(psi.value());
                cum_n_lambda.push(n_lambda.value());
            }
        }
        let checksum = fnv1a(n_max, &values[1..]);
        MangoldtTable { n_max, values, powers, logs, cum_psi, cum_n_lambda, checksum }
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn checksum(&self) -> u64 {
        self.checksum
    }

    /// Λ(n) for `n <= n_max`; zero outside the table.
    pub fn lambda(&self, n: u64) -> f64 {
        self.values.get(n as usize).copied().unwrap_or(0.0)
    }

    /// Dense view indexed by `n` (index 0 holds 0).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Prime powers `p^k <= n_max`, ascending.
    pub fn prime_powers(&self) -> &[u64] {
        &self.powers
    }

    /// `log p` for each entry of [`prime_powers`](Self::prime_powers).
    pub fn prime_power_logs(&self) -> &[f64] {
        &self.logs
    }

    /// Number of prime powers `<= x`.
    pub fn count_upto(&self, x: f64) -> usize {
        if x < 2.0 {
            return 0;
        }
        let n = x.floor() as u64;
        self.powers.partition_point(|&p| p <= n)
    }

    fn check(&self, x: f64) -> Result<()> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(domain(format!("x must be positive and finite, got {x}")));
        }
        if x > self.n_max as f64 {
            return Err(Error::Coverage { requested: x, available: self.n_max as f64 });
        }
        Ok(())
    }

    /// `(ψ(x), Σ_{n≤x} nΛ(n))` without coverage checks.
    #[inline]
    pub fn prefix(&self, x: f64) -> (f64, f64) {
        let k = self.count_upto(x);
        if k == 0 {
            (0.0, 0.0)
        } else {
            (self.cum_psi[k - 1], self.cum_n_lambda[k - 1])
        }
    }

    /// ψ(x) = Σ_{n≤x} Λ(n).
    pub fn psi(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.prefix(x).0)
    }

    /// ψ̃(x) = Σ_{n≤x} Λ(n)(x − n).
    pub fn psi_tilde(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let (p, m) = self.prefix(x);
        Ok(x * p - m)
    }

    /// Δ(x) = ψ(x) − x.
    pub fn delta(&self, x: f64) -> Result<f64> {
        Ok(self.psi(x)? - x)
    }

    /// Δ̃(x) = ψ̃(x) − x²/2.
    pub fn delta_tilde(&self, x: f64) -> Result<f64> {
        Ok(self.psi_tilde(x)? - 0.5 * x * x)
    }

    /// Δ̃ without coverage checks, for quadrature inner loops.
    #[inline]
    pub fn delta_tilde_unchecked(&self, x: f64) -> f64 {
        let (p, m) = self.prefix(x);
        x * p - m - 0.5 * x * x
    }

    /// Δ without coverage checks.
    #[inline]
    pub fn delta_unchecked(&self, x: f64) -> f64 {
        self.prefix(x).0 - x
    }

    pub fn chebyshev_sample(&self, x: f64) -> Result<ChebyshevSample> {
        self.check(x)?;
        let (psi, m) = self.prefix(x);
        let psi_tilde = x * psi - m;
        Ok(ChebyshevSample {
            x,
            psi,
            psi_tilde,
            delta: psi - x,
            delta_tilde: psi_tilde - 0.5 * x * x,
        })
    }

    /// `lo`, every prime power strictly inside `(lo, hi)`, then `hi`: the
    /// points where ψ jumps and Δ̃ has a kink.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = vec![lo];
        let start = self.powers.partition_point(|&p| (p as f64) <= lo);
        for &p in &self.powers[start..] {
            let pf = p as f64;
            if pf >= hi {
                break;
            }
            out.push(pf);
        }
        out.push(hi);
        out
    }

    /// Write the binary cache: magic, version, n_max, Λ(1..=n_max), checksum.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&self.n_max.to_le_bytes())?;
        for v in &self.values[1..] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&self.checksum.to_le_bytes())?;
        w.flush()?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Cache(format!("bad magic {magic:?}, expected \"ZEXP\"")));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!(
                "unsupported format version {version} (this build reads version {CACHE_VERSION})"
            )));
        }
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let n_max = u64::from_le_bytes(b8);
        if n_max < 2 {
            return Err(Error::Cache(format!("n_max {n_max} below 2")));
        }
        let mut values = Vec::with_capacity((n_max + 1) as usize);
        values.push(0.0);
        let mut buf = vec![0u8; 8 * 8192];
        let mut remaining = n_max as usize;
        while remaining > 0 {
            let take = remaining.min(8192);
            let bytes = &mut buf[..take * 8];
            r.read_exact(bytes).map_err(|e| Error::Cache(format!("truncated value array: {e}")))?;
            for c in bytes.chunks_exact(8) {
                values.push(f64::from_le_bytes(c.try_into().unwrap()));
            }
            remaining -= take;
        }
        r.read_exact(&mut b8).map_err(|e| Error::Cache(format!("missing checksum: {e}")))?;
        let stored = u64::from_le_bytes(b8);
        let table = MangoldtTable::from_values(n_max, values);
        if table.checksum != stored {
            return Err(Error::Cache(format!(
                "checksum mismatch: stored {stored:#018x}, computed {:#018x}",
                table.checksum
            )));
        }
        Ok(table)
    }

    /// Read the cache when present and large enough, otherwise sieve (and
    /// try to refresh the cache).
    pub fn load_or_build(path: &Path, n_max: u64, config: &SieveConfig) -> Result<Self> {
        if path.exists() {
            if let Ok(t) = Self::read_cache(path) {
                if t.n_max == n_max {
                    return Ok(t);
                }
            }
        }
        let t = build_table_with(n_max, config)?;
        let _ = t.write_cache(path);
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_lambda(n: u64) -> f64 {
        if n < 2 {
            return 0.0;
        }
        let mut m = n;
        let mut p = 2;
        while m % p != 0 {
            p += 1;
        }
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            (p as f64).ln()
        } else {
            0.0
        }
    }

    #[test]
    fn von_mangoldt_examples() {
        assert_eq!(von_mangoldt(1).unwrap(), 0.0);
        assert!((von_mangoldt(8).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(von_mangoldt(12).unwrap(), 0.0);
        assert!(matches!(von_mangoldt(0), Err(Error::Domain(_))));
        assert!((von_mangoldt(1_000_003).unwrap() - 1_000_003f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn table_matches_factorization() {
        let t = build_table(20_000).unwrap();
        for n in 1..=20_000u64 {
            assert_eq!(t.lambda(n), brute_lambda(n), "n = {n}");
        }
    }

    #[test]
    fn table_ten_support() {
        let t = build_table(10).unwrap();
        let support: Vec<u64> = (1..=10).filter(|&n| t.lambda(n) != 0.0).collect();
        assert_eq!(support, vec![2, 3, 4, 5, 7, 8, 9]);
        let t2 = build_table(2).unwrap();
        assert_eq!(t2.prime_powers(), &[2]);
        assert!((t2.lambda(2) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn n_max_below_two_rejected() {
        assert!(build_table(1).is_err());
    }

    #[test]
    fn memory_budget_enforced() {
        let err = build_table_with(1_000_000, &SieveConfig { memory_budget: 1 << 20 }).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("1048576"), "{msg}");
    }

    #[test]
    fn psi_examples() {
        let t = build_table(100).unwrap();
        let psi10 = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert_eq!(t.psi(1.0).unwrap(), 0.0);
        assert!((t.psi(10.0).unwrap() - psi10).abs() < 1e-13);
        assert!((psi10 - 7.832_014_180_505_469).abs() < 1e-14);
        assert_eq!(t.psi(10.5).unwrap(), t.psi(10.0).unwrap());
        assert!(matches!(t.psi(101.0), Err(Error::Coverage { .. })));
    }

    #[test]
    fn psi_tilde_examples() {
        let t = build_table(100).unwrap();
        assert_eq!(t.psi_tilde(1.0).unwrap(), 0.0);
        assert_eq!(t.delta_tilde(1.0).unwrap(), -0.5);
        assert!((t.psi_tilde(3.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        let fd = (t.psi_tilde(10.4).unwrap() - t.psi_tilde(10.1).unwrap()) / 0.3;
        assert!((fd - t.psi(10.2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_sample_bundles_consistently() {
        let t = build_table(100).unwrap();
        let s = t.chebyshev_sample(1.0).unwrap();
        assert_eq!((s.psi, s.psi_tilde, s.delta, s.delta_tilde), (0.0, 0.0, -1.0, -0.5));
        let s = t.chebyshev_sample(10.0).unwrap();
        assert!((s.delta + 2.167_985_819_494_530_7).abs() < 1e-13);
        assert_eq!(s.delta, s.psi - s.x);
        assert_eq!(s.delta_tilde, s.psi_tilde - s.x * s.x / 2.0);
    }

    #[test]
    fn mertens_style_sanity() {
        let t = build_table(1_000_000).unwrap();
        for &n in &[1_000u64, 10_000, 100_000, 1_000_000] {
            let s: f64 = (1..=n).map(|k| t.lambda(k) / k as f64).sum();
            assert!((s - (n as f64).ln()).abs() < 2.0);
        }
        let ratio = t.psi(1e6).unwrap() / 1e6;
        assert!(ratio > 0.998 && ratio < 1.002, "{ratio}");
    }

    #[test]
    fn deterministic_checksum() {
        assert_eq!(build_table(50_000).unwrap().checksum(), build_table(50_000).unwrap().checksum());
        assert_ne!(build_table(50_000).unwrap().checksum(), build_table(50_001).unwrap().checksum());
    }

    #[test]
    fn cache_round_trip_and_version_check() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.zexp");
        let t = build_table(12_345).unwrap();
        t.write_cache(&path).unwrap();
        let back = MangoldtTable::read_cache(&path).unwrap();
        assert_eq!(back.checksum(), t.checksum());
        assert_eq!(back.values(), t.values());

        let mut bytes = std::fs::read(&path).unwrap();
        bytes[4] = 9;
        std::fs::write(&path, &bytes).unwrap();
        let err = MangoldtTable::read_cache(&path).unwrap_err().to_string();
        assert!(err.contains("version 9"), "{err}");

        bytes[4] = 1;
        let n = bytes.len();
        bytes[n - 20] ^= 0x40;
        std::fs::write(&path, &bytes).unwrap();
        assert!(MangoldtTable::read_cache(&path).unwrap_err().to_string().contains("checksum"));
    }

    #[test]
    fn missing_cache_triggers_rebuild() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("absent.zexp");
        let t = MangoldtTable::load_or_build(&path, 1000, &SieveConfig::default()).unwrap();
        assert_eq!(t.n_max(), 1000);
        assert!(path.exists());
    }

    #[test]
    fn breakpoints_are_prime_powers() {
        let t = build_table(100).unwrap();
        assert_eq!(t.breakpoints(1.5, 10.0), vec![1.5, 2.0, 3.0, 4.0, 5.0, 7.0, 8.0, 9.0, 10.0]);
    }
}
