use num_complex::Complex64;
use zexp::arithmetic::build_table;
use zexp::explicit::*;
use zexp::zeros::parse_zero_str;

#[test]
fn lemma_reaches_zeta_logderiv_at_two() {
    let table = build_table(100_000).unwrap();
    let cat = parse_zero_str(include_str!("../data/zeros_1000.txt")).unwrap();
    let policy = TruncationPolicy::new(1e4, 100.0, 50).unwrap();
    let l = lemma_rhs(Complex64::new(2.0, 0.0), &policy, &cat, &table).unwrap();
    // mpmath: zeta(2, derivative=1)/zeta(2)
    let exact = -0.569_960_993_094_532_8;
    assert!((l.corrected().re - exact).abs() <= l.tail_bound() + 1e-12);
    assert!(l.corrected().im.abs() < 1e-12);
}

#[test]
fn guinand_with_log_approximates_pi_s() {
    let table = build_table(100_000).unwrap();
    let cat = parse_zero_str(include_str!("../data/zeros_100.txt")).unwrap();
    for t in [8.0, 10.0, 17.0, 23.0] {
        let g = guinand_truncated(t, 1e5, GuinandVariant::WithLog, &table).unwrap();
        assert!((g.value - std::f64::consts::PI * cat.s_of_t(t).unwrap()).abs() < 0.2, "T = {t}");
    }
}

#[test]
fn zero_sum_plus_constant_is_delta_tilde() {
    let table = build_table(10_000).unwrap();
    let cat = parse_zero_str(include_str!("../data/zeros_1000.txt")).unwrap();
    let policy = TruncationPolicy::new(1e4, cat.t_max(), 50).unwrap();
    for x in [3.5, 10.0, 42.0] {
        let z = delta_tilde_from_zeros(x, &policy, &cat).unwrap();
        let a = table.delta_tilde(x).unwrap();
        assert!((a - z.value - PSI1_CONSTANT).abs() <= z.tail, "x = {x}");
    }
    let grid: Vec<f64> = (0..24).map(|i| 2.0 * 100f64.powf(i as f64 / 23.0)).collect();
    let fit = offset_fit(&grid, &policy, &cat, &table).unwrap();
    assert!((fit.c - PSI1_CONSTANT).abs() < 0.01);
}

#[test]
fn contour_routes_agree() {
    for (t, x) in [(0.7, 20.0), (5.0, 300.0), (12.0, 5000.0)] {
        let c = im_contour_term(t, x).unwrap();
        assert!((c.value - c.via_f2).abs() < 1e-8);
        assert!((c.value - c.direct.unwrap()).abs() < 1e-8);
    }
}
