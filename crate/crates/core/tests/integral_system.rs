use zexp::arithmetic::build_table;
use zexp::explicit::{delta_tilde_from_zeros, TruncationPolicy};
use zexp::system::*;
use zexp::zeros::parse_zero_str;

#[test]
fn forward_map_equals_zero_sum() {
    let cat = parse_zero_str(include_str!("../data/zeros_1000.txt")).unwrap();
    let spec = QuadratureSpec::new(500.0, 8, 1e-9, 1.5).unwrap();
    let policy = TruncationPolicy::new(1e4, 500.0, 50).unwrap();
    for x in [1.01, 7.0, 30.0] {
        let f = forward_map(x, &spec, &cat).unwrap();
        let z = delta_tilde_from_zeros(x, &policy, &cat).unwrap();
        assert!((f.value - z.value).abs() < 1e-8 + f.quad_error, "x = {x}: {} vs {}", f.value, z.value);
    }
}

#[test]
fn inverse_map_near_catalog_s() {
    let table = build_table(100_000).unwrap();
    let cat = parse_zero_str(include_str!("../data/zeros_100.txt")).unwrap();
    let spec = QuadratureSpec::new(1e5, 8, 1e-8, 1.5).unwrap();
    for t in [8.0, 10.0, 17.0] {
        let r = inverse_map(t, &spec, &table).unwrap();
        assert!((r.value - cat.s_of_t(t).unwrap()).abs() < 0.5);
    }
    let stated = inverse_map_with(10.0, &spec, &table, BoundaryConvention::Stated).unwrap();
    let fixed = inverse_map(10.0, &spec, &table).unwrap();
    assert!((stated.value - fixed.value).abs() > 0.1);
}

#[test]
fn spec_validation() {
    assert!(QuadratureSpec::new(1e5, 3, 1e-8, 1.5).is_err());
    assert!(QuadratureSpec::new(1e5, 8, 1e-8, 2.0).is_err());
    let table = build_table(1000).unwrap();
    let spec = QuadratureSpec::new(1e4, 8, 1e-8, 1.5).unwrap();
    assert!(matches!(inverse_map(5.0, &spec, &table), Err(zexp::Error::Coverage { .. })));
}

#[test]
fn smoothed_transform_is_even_in_k() {
    let table = build_table(100_000).unwrap();
    let a = smoothed_transform_j(3.0, 1.0, &table).unwrap();
    let b = smoothed_transform_j(-3.0, 1.0, &table).unwrap();
    assert!((a.lhs - b.lhs).abs() < 1e-12);
    assert!((a.lhs - a.rhs_exact).abs() < 1e-3);
}
