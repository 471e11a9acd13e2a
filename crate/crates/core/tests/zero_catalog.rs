use zexp::zeros::{parse_zero_str, s1_by_quadrature};
use zexp::Error;

const ZEROS: &str = include_str!("../data/zeros_1000.txt");

#[test]
fn counts_and_s_against_mpmath() {
    let c = parse_zero_str(ZEROS).unwrap();
    // N(T) from mpmath.nzeros, S(T) = N(T) − θ(T)/π − 1 with mpmath.siegeltheta.
    let cases = [
        (10.0, 0, -0.023_719_897_999_744_944),
        (50.0, 10, 0.577_085_577_939_301_5),
        (100.0, 29, -0.002_409_902_271_816_779_8),
        (500.0, 269, -0.586_730_881_235_795_8),
        (1000.0, 649, 0.383_758_055_576_300_7),
    ];
    for (t, n, s) in cases {
        assert_eq!(c.count_n(t).unwrap(), n);
        assert!((c.s_of_t(t).unwrap() - s).abs() < 1e-9, "S({t})");
    }
}

#[test]
fn s1_closed_form_matches_quadrature() {
    let c = parse_zero_str(ZEROS).unwrap();
    for t in [20.0, 77.7, 300.0] {
        let a = c.s1_of_t(t).unwrap();
        let b = s1_by_quadrature(&c, t).unwrap();
        assert!((a - b).abs() < 1e-7, "{t}: {a} vs {b}");
    }
}

#[test]
fn errors_name_the_problem() {
    let c = parse_zero_str(ZEROS).unwrap();
    assert!(matches!(c.s_of_t(c.ordinates()[3]), Err(Error::JumpPoint(_))));
    assert!(matches!(c.count_n(2000.0), Err(Error::Coverage { .. })));
    assert!(matches!(parse_zero_str("# nothing\n"), Err(Error::EmptyInput)));
    assert!(matches!(parse_zero_str("14.1\n14.0\n"), Err(Error::NonMonotone { line: 2, .. })));
    assert!(matches!(parse_zero_str("14.1\nabc\n"), Err(Error::Parse { line: 2, .. })));
}
