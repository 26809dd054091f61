use edgestat_core::exec::Serial;
use edgestat_core::fredholm::NystromConfig;
use edgestat_core::kernels::bulk_kernel_lc;
use edgestat_core::limits::*;
use edgestat_core::Error;

fn assert_trend(t: &ConvergenceTable) {
    assert!(t.passed(), "{}", t.render());
}

#[test]
fn interpolating_kernel_limits() {
    let airy = check_thm_1_2(Direction::ToAiry, &[2.0, 6.0, 20.0], &Serial).unwrap();
    assert_trend(&airy);
    assert!(airy.errors.windows(2).all(|w| w[1] < w[0]));
    let poisson = check_thm_1_2(Direction::ToPoisson, &[0.4, 0.2, 0.1], &Serial).unwrap();
    assert_trend(&poisson);
    let again = check_thm_1_2(Direction::ToAiry, &[2.0, 6.0, 20.0], &Serial).unwrap();
    assert_eq!(airy, again);
    let twice = check_thm_1_2(Direction::ToAiry, &[6.0, 6.0 + 1e-9], &Serial).unwrap();
    assert!((twice.errors[0] - twice.errors[1]).abs() < 1e-6);
}

#[test]
fn ladder_validation() {
    assert!(check_thm_1_2(Direction::ToAiry, &[6.0, 2.0], &Serial).is_err());
    assert!(check_thm_1_2(Direction::ToPoisson, &[0.1, 0.2], &Serial).is_err());
    assert!(check_thm_1_2(Direction::ToPoisson, &[0.8, 0.2], &Serial).is_err());
    assert!(check_thm_1_2(Direction::ToAiry, &[6.0], &Serial).is_err());
    assert!(check_thm_1_8(0.01, &[50, 100], &Serial).is_err());
    assert!(check_thm_1_8(1.0, &[50, 500], &Serial).is_err());
    assert!(check_thm_1_10(5.0, &[64, 216], &Serial).is_err());
}

#[test]
fn distribution_limits() {
    let tw = check_thm_1_3(Direction::ToAiry, &[2.0, 6.0, 16.0], &NystromConfig::default(), &Serial).unwrap();
    assert_trend(&tw);
    assert!(tw.last_error() < 5e-3);
    let cfg = NystromConfig { node_count: 1600, interval_length: None, refine: false };
    let g = check_thm_1_3(Direction::ToPoisson, &[0.4, 0.2, 0.1], &cfg, &Serial).unwrap();
    assert!(g.errors.windows(2).all(|w| w[1] < w[0]), "{}", g.render());
}

#[test]
fn mns_limits() {
    let gue = check_prop_1_7(MuDirection::ToGue, 10, &[2.0, 4.0, 8.0], &Serial).unwrap();
    assert_trend(&gue);
    let off = check_prop_1_7(MuDirection::ToPoissonDensity, 10, &[0.2, 0.1, 0.05], &Serial).unwrap();
    assert_trend(&off);
    let ratios: Vec<f64> = [0.2, 0.1, 0.05].iter().map(|&mu| prop_1_7_diag_ratio(10, mu).unwrap()).collect();
    assert!(ratios.windows(2).all(|w| (1.0 - w[1]).abs() < (1.0 - w[0]).abs()), "{ratios:?}");
}

#[test]
fn bulk_limit() {
    let t = check_thm_1_8(1.0, &[50, 100, 200], &Serial).unwrap();
    assert_trend(&t);
    assert!(bulk_approx_error(0.05).unwrap() < 0.02);
    for x in [-1.0, 0.0, 0.7] {
        assert!(bulk_kernel_lc(1.0, x, x).unwrap() > 0.0);
    }
}

#[test]
fn edge_poisson_limit_and_wrong_centering() {
    let right = check_thm_1_9(1.0, 1.0, &[200, 400, 800], &Serial).unwrap();
    assert_trend(&right);
    let wrong = check_thm_1_9(1.0, 0.5, &[200, 400, 800], &Serial).unwrap();
    assert!(wrong.last_error() > 2.0 * right.last_error(), "{} vs {}", wrong.last_error(), right.last_error());
}

#[test]
fn edge_transition_limit() {
    let t = check_thm_1_10(1.0, &[64, 216, 512], &Serial).unwrap();
    assert_trend(&t);
    assert!(t.last_error() < 0.05 * m_alpha_diag_scale(1.0).unwrap());
    assert!(t.last_error() < 0.05);
}

#[test]
fn failed_trend_is_reported_with_table() {
    let t = check_thm_1_9(1.0, 1.0, &[200, 400], &Serial).unwrap();
    let reversed = ConvergenceTable { errors: t.errors.iter().rev().copied().collect(), ..t };
    match reversed.into_result() {
        Err(Error::Trend(s)) => assert!(s.contains("sup_error")),
        other => panic!("{other:?}"),
    }
}
