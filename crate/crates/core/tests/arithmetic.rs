use std::io::Write;

use proptest::prelude::*;
use zexp::arithmetic::{build_table, MangoldtTable, SieveConfig};
use zexp::Error;

// Λ(n) by factoring, independent of the sieve.
fn lambda_brute(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    (n as f64).ln()
}

#[test]
fn psi_matches_brute_force() {
    let t = build_table(5000).unwrap();
    let mut psi = 0.0;
    let mut nl = 0.0;
    for n in 1..=5000u64 {
        psi += lambda_brute(n);
        nl += n as f64 * lambda_brute(n);
        if n % 97 == 0 {
            let x = n as f64 + 0.5;
            assert!((t.psi(x).unwrap() - psi).abs() < 1e-9 * psi.max(1.0));
            assert!((t.psi_tilde(x).unwrap() - (x * psi - nl)).abs() < 1e-9 * (x * psi));
        }
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.zexp");
    let t = build_table(100_000).unwrap();
    t.write_cache(&path).unwrap();
    let back = MangoldtTable::read_cache(&path).unwrap();
    assert_eq!(back.checksum(), t.checksum());
    assert_eq!(back.n_max(), 100_000);
    assert_eq!(back.psi(99_999.0).unwrap().to_bits(), t.psi(99_999.0).unwrap().to_bits());
    let again = MangoldtTable::load_or_build(&path, 100_000, &SieveConfig::default()).unwrap();
    assert_eq!(again.checksum(), t.checksum());
}

#[test]
fn cache_rejects_other_versions_and_damage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.zexp");
    build_table(1000).unwrap().write_cache(&path).unwrap();
    let good = std::fs::read(&path).unwrap();

    let mut v9 = good.clone();
    v9[4..8].copy_from_slice(&9u32.to_le_bytes());
    std::fs::File::create(&path).unwrap().write_all(&v9).unwrap();
    let err = MangoldtTable::read_cache(&path).unwrap_err().to_string();
    assert!(err.contains("version 9"), "{err}");

    let mut flipped = good.clone();
    flipped[40] ^= 1;
    std::fs::write(&path, &flipped).unwrap();
    assert!(matches!(MangoldtTable::read_cache(&path), Err(Error::Cache(_))));
}

#[test]
fn coverage_and_budget_errors() {
    let t = build_table(100).unwrap();
    assert!(matches!(t.psi(101.0), Err(Error::Coverage { .. })));
    assert!(matches!(build_table_with_budget(1_000_000, 1000), Err(Error::Resource(_))));
}

fn build_table_with_budget(n: u64, bytes: u64) -> zexp::Result<MangoldtTable> {
    zexp::arithmetic::build_table_with(n, &SieveConfig { memory_budget: bytes })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn psi_tilde_is_continuous_and_increasing(x in 2.0f64..9_000.0, h in 1e-9f64..1e-3) {
        let t = build_table_cached();
        let a = t.psi_tilde(x).unwrap();
        let b = t.psi_tilde(x + h).unwrap();
        prop_assert!(b >= a - 1e-12 * b.abs());
        prop_assert!(b - a <= h * t.psi(x + h).unwrap() + 1e-12 * b.abs());
        prop_assert!(b - a >= h * t.psi(x).unwrap() - 1e-12 * b.abs());
    }
}

fn build_table_cached() -> &'static MangoldtTable {
    static T: std::sync::OnceLock<MangoldtTable> = std::sync::OnceLock::new();
    T.get_or_init(|| build_table(10_000).unwrap())
}
