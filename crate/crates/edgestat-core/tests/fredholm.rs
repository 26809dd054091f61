use edgestat_core::fredholm::*;
use edgestat_core::kernels::*;
use edgestat_core::quad::QuadratureRule;
use edgestat_core::specfun::gumbel_cdf;
use edgestat_core::Error;
use std::f64::consts::PI;

/// K(x, y) = phi(x) phi(y) with phi a Gaussian bump of squared mass 1/4.
struct RankOne;

impl RankOne {
    fn phi(x: f64) -> f64 {
        let c = (0.25 / (PI / 2.0).sqrt()).sqrt();
        c * (-(x - 2.0).powi(2)).exp()
    }
}

impl Kernel for RankOne {
    fn eval(&self, x: f64, y: f64) -> f64 {
        Self::phi(x) * Self::phi(y)
    }
    fn decay_rate(&self) -> f64 {
        f64::INFINITY
    }
    fn diag_envelope(&self, x: f64) -> f64 {
        if x < 2.0 { 1.0 } else { Self::phi(x).powi(2) }
    }
    fn label(&self) -> String {
        "rank-one".into()
    }
}

struct Zero;

impl Kernel for Zero {
    fn eval(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn decay_rate(&self) -> f64 {
        f64::INFINITY
    }
    fn diag_envelope(&self, _: f64) -> f64 {
        0.0
    }
    fn label(&self) -> String {
        "zero".into()
    }
}

fn cfg() -> NystromConfig {
    NystromConfig::default()
}

#[test]
fn elementary_determinants() {
    let d = fredholm_det(&RankOne, -4.0, &cfg()).unwrap();
    assert!((d - 0.75).abs() < 1e-10, "{d}");
    assert_eq!(fredholm_det(&Zero, 0.0, &cfg()).unwrap(), 1.0);
    assert!(fredholm_det(&Zero, 0.0, &NystromConfig::with_nodes(4)).is_err());
    let short = NystromConfig { interval_length: Some(1.0), ..cfg() };
    assert!(matches!(fredholm_det(&AiryKernel, 0.0, &short), Err(Error::Config(_))));
}

#[test]
fn airy_gap_probabilities() {
    let lo = fredholm_det(&AiryKernel, -10.0, &cfg()).unwrap();
    assert!((0.0..=1e-3).contains(&lo), "{lo}");
    let hi = fredholm_det(&AiryKernel, 6.0, &cfg()).unwrap();
    assert!((hi - 1.0).abs() < 1e-8);
    assert!(tracy_widom_cdf(-12.5, &cfg()).is_err());
}

#[test]
fn tracy_widom_cdf_shape() {
    let c = cfg();
    let mass = tracy_widom_cdf(2.0, &c).unwrap() - tracy_widom_cdf(-4.0, &c).unwrap();
    assert!(mass > 0.9 && mass <= 1.0);
    let mut prev = -1.0;
    for i in 0..=120 {
        let v = tracy_widom_cdf(-8.0 + 0.1 * i as f64, &c).unwrap();
        assert!(v >= prev - 1e-9 && (0.0..=1.0 + 1e-12).contains(&v));
        prev = v;
    }
}

/// Mean and variance of the GUE Tracy-Widom law from the Painleve II literature.
#[test]
fn tracy_widom_moments() {
    let tab = tracy_widom_table(&cfg()).unwrap();
    let rule = QuadratureRule::composite(-12.0, 8.0, 80, 16);
    // E X = int_0^inf (1 - F) - int_-inf^0 F, and similarly for E X^2
    let mean = rule.integrate(|t| if t < 0.0 { -tab.eval(t) } else { 1.0 - tab.eval(t) });
    let second = rule.integrate(|t| 2.0 * t.abs() * if t < 0.0 { tab.eval(t) } else { 1.0 - tab.eval(t) });
    assert!((mean + 1.771_086_807_4).abs() < 1e-7, "{mean}");
    assert!((second - mean * mean - 0.813_194_792_8).abs() < 1e-7, "{}", second - mean * mean);
}

#[test]
fn f_alpha_limits() {
    let c = cfg();
    let mut worst: f64 = 0.0;
    for i in 0..=14 {
        let t = -5.0 + 0.5 * i as f64;
        worst = worst.max((f_alpha_cdf(16.0, t, &c).unwrap() - tracy_widom_cdf(t, &c).unwrap()).abs());
    }
    assert!(worst < 5e-3, "{worst}");

    let xi: Vec<f64> = (0..=12).map(|i| -2.0 + 0.5 * i as f64).collect();
    let gumbel_err = |alpha: f64| {
        let k = GumbelScaledKernel::new(alpha).unwrap();
        let cfg = NystromConfig { node_count: 800, interval_length: None, refine: true };
        let v = fredholm_det_grid(&k, &xi, &cfg).unwrap();
        v.iter().zip(&xi).map(|(d, &x)| (d - gumbel_cdf(x)).abs()).fold(0.0, f64::max)
    };
    let (e4, e2) = (gumbel_err(0.4), gumbel_err(0.2));
    assert!(e2 < e4, "{e2} vs {e4}");
    // the Gumbel-scaled determinant is the x-scale one at t = xi/alpha - f(alpha)
    let direct = f_alpha_cdf(0.4, 1.0 / 0.4 - gumbel_shift(0.4), &NystromConfig::with_nodes(160)).unwrap();
    let scaled = fredholm_det(&GumbelScaledKernel::new(0.4).unwrap(), 1.0, &NystromConfig::with_nodes(160)).unwrap();
    assert!((direct - scaled).abs() < 1e-8);

    let mut prev = 0.0;
    for i in 0..=20 {
        let v = f_alpha_cdf(1.0, -6.0 + 0.5 * i as f64, &c).unwrap();
        assert!(v >= prev - 1e-9 && v <= 1.0 + 1e-12);
        prev = v;
    }
}

#[test]
fn nested_grid_matches_single_determinants() {
    let k = InterpolatingKernel::new(1.0).unwrap();
    let ts = [1.0, -3.0, 0.0, -1.5, 2.5];
    let grid = fredholm_det_grid(&k, &ts, &NystromConfig::with_nodes(120)).unwrap();
    for (t, g) in ts.iter().zip(&grid) {
        let single = fredholm_det(&k, *t, &cfg()).unwrap();
        assert!((single - g).abs() < 1e-9, "t={t}: {single} vs {g}");
        assert!((0.0..=1.0).contains(g));
    }
}

#[test]
fn node_doubling_is_spectral() {
    let no_refine = |n| NystromConfig { node_count: n, interval_length: None, refine: false };
    let k = GumbelScaledKernel::new(0.5).unwrap();
    let exact = fredholm_det(&k, -1.0, &no_refine(640)).unwrap();
    let err = |n| (fredholm_det(&k, -1.0, &no_refine(n)).unwrap() - exact).abs();
    let (e40, e80) = (err(40), err(80));
    assert!(e40 > 1e-10, "{e40:e}");
    assert!(e80 < e40 / 10.0, "{e40:e} {e80:e}");
}

#[test]
fn series_agrees_where_trace_is_small() {
    // same discretization on both sides
    let c = NystromConfig { refine: false, ..cfg() };
    for t in [2.0, 3.0] {
        let s = fredholm_series(&AiryKernel, t, &c).unwrap();
        let d = fredholm_det(&AiryKernel, t, &c).unwrap();
        assert!((s.partial_sums[3] - d).abs() <= s.remainder_bound + 1e-13, "t={t}");
        assert!((s.partial_sums[1] - d).abs() > (s.partial_sums[3] - d).abs());
    }
    let k = InterpolatingKernel::new(2.0).unwrap();
    let s = fredholm_series(&k, 2.0, &c).unwrap();
    let d = fredholm_det(&k, 2.0, &c).unwrap();
    assert!((s.partial_sums[3] - d).abs() <= s.remainder_bound + 1e-13);
}

#[test]
fn expected_counts() {
    let c = cfg();
    let mu: f64 = 0.05;
    let n = 20.0;
    let k = mns_kernel((-mu).exp(), (mu * n).exp() - 1.0, 1e-13).unwrap();
    let count = expected_count(&k, f64::NEG_INFINITY, &c).unwrap();
    assert!((count - k.trace()).abs() < 1e-8, "{count} vs {}", k.trace());
    assert!((count - n).abs() < 1.0);
    let airy_tail = expected_count(&AiryKernel, 6.0, &c).unwrap();
    assert!(airy_tail < 1e-6 && airy_tail > 0.0);
    let m = InterpolatingKernel::new(1.0).unwrap();
    let whole = expected_count(&m, -2.0, &c).unwrap();
    let right = expected_count(&m, 1.0, &c).unwrap();
    let rule = QuadratureRule::composite(-2.0, 1.0, 6, 16);
    let left = rule.integrate(|x| m.eval(x, x));
    assert!((whole - left - right).abs() < 1e-10);
}

#[test]
fn refinement_failure_is_reported() {
    let k = GumbelScaledKernel::new(0.1).unwrap();
    match fredholm_det(&k, -1.0, &NystromConfig::with_nodes(16)) {
        Err(Error::Accuracy { coarse, fine }) => assert!((coarse - fine).abs() > 1e-8),
        other => panic!("{other:?}"),
    }
}

#[test]
fn memo_reuses_values() {
    let memo = DetMemo::new();
    let a = memo.fredholm_det(&AiryKernel, -1.0, &cfg()).unwrap();
    let b = memo.fredholm_det(&AiryKernel, -1.0, &cfg()).unwrap();
    assert_eq!(a, b);
    assert_eq!(memo.len(), 1);
}
