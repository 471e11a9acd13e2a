use zexp_demo::{catalog_height, delta_tilde_compare, guinand_sweep, staircase};

#[test]
fn staircase_rows_are_monotone() {
    let v = staircase(100.0, 0.25).unwrap();
    let ns: Vec<f64> = v.chunks(3).map(|r| r[1]).collect();
    assert!(ns.windows(2).all(|w| w[1] >= w[0]));
    // 29 ordinates below 100
    assert_eq!(*ns.last().unwrap(), 29.0);
    assert!(catalog_height() > 1000.0);
}

#[test]
fn sweep_is_log_spaced() {
    let v = guinand_sweep(17.0, 1e4, 3).unwrap();
    let xs: Vec<f64> = v[..v.len() - 1].chunks(2).map(|r| r[0]).collect();
    assert_eq!(xs.len(), 10);
    assert!((xs[0] - 10.0).abs() < 1e-12 && (xs[9] - 1e4).abs() < 1e-6);
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(staircase(-1.0, 0.1).is_err());
    assert!(guinand_sweep(10.0, 1e9, 2).is_err());
    assert!(delta_tilde_compare(1.0, 100.0, 5).is_err());
    assert!(delta_tilde_compare(100.0, 1e5, 5).is_err());
}
