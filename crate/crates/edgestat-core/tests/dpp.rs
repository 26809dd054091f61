use edgestat_core::dpp::*;
use edgestat_core::fredholm::{tracy_widom_table, CdfTable, NystromConfig};
use edgestat_core::kernels::{mns_kernel, Kernel, SpectralKernel};
use edgestat_core::specfun::{gumbel_cdf, HermiteBasis};
use edgestat_core::stats::*;
use proptest::prelude::*;

fn samples(k: &SpectralKernel, n: u64, base: u64) -> Vec<PointConfiguration> {
    (0..n).map(|i| sample_grand_canonical(k, base + i).unwrap()).collect()
}

#[test]
fn zero_weights_give_empty_configurations() {
    let k = SpectralKernel::new(vec![0.0; 5], HermiteBasis::new(1.0, 4).unwrap()).unwrap();
    for s in 0..20 {
        assert!(sample_grand_canonical(&k, s).unwrap().points.is_empty());
    }
}

#[test]
fn single_ground_state_is_gaussian() {
    let k = SpectralKernel::new(vec![1.0], HermiteBasis::new(1.0, 0).unwrap()).unwrap();
    let xs: Vec<f64> = (0..10_000u64)
        .map(|s| {
            let c = sample_grand_canonical(&k, s).unwrap();
            assert_eq!(c.points.len(), 1);
            c.points[0]
        })
        .collect();
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    assert!((mean(&sq) - 0.5).abs() < 3.0 * standard_error(&sq), "{}", mean(&sq));
}

#[test]
fn projection_count_is_exact() {
    let k = SpectralKernel::new(vec![1.0, 1.0, 0.0, 1.0], HermiteBasis::new(1.3, 3).unwrap()).unwrap();
    for s in 0..200 {
        let c = sample_grand_canonical(&k, s).unwrap();
        assert_eq!(c.points.len(), 3);
        assert!(c.points.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn count_law_is_poisson_binomial() {
    let k = mns_kernel((-0.3f64).exp(), 6.0, 1e-12).unwrap();
    let counts: Vec<usize> = samples(&k, 10_000, 77).iter().map(|c| c.points.len()).collect();
    let exact = CountDistribution::of(&k);
    assert!((exact.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let tv = total_variation(&count_frequencies(&counts), &exact.probabilities);
    assert!(tv < 0.03, "TV {tv}");
}

#[test]
fn rho1_and_thinning() {
    let (mu, n) = (0.1f64, 20.0f64);
    let k = mns_kernel((-mu).exp(), (mu * n).exp_m1(), 1e-12).unwrap();
    let s = samples(&k, 2000, 5);
    let edges = uniform_edges(-3.0, 3.0, 24);
    let h = empirical_rho1(&s, &edges).unwrap();
    assert!(h.agreement(3.0, |x| k.eval(x, x)) >= 0.95);
    let thinned: Vec<PointConfiguration> = s.iter().enumerate().map(|(i, c)| thin(c, 0.5, i as u64)).collect();
    let t = empirical_rho1(&thinned, &edges).unwrap();
    assert!(t.agreement(3.0, |x| 0.5 * k.eval(x, x)) >= 0.9);
    // negative association on coarse bins
    let pe = empirical_pair_excess(&s, &uniform_edges(-3.0, 3.0, 4)).unwrap();
    for (e, se) in pe.excess.iter().zip(pe.std_err.iter()) {
        assert!(*e <= 3.0 * se + 1e-12, "{e} vs {se}");
    }
    assert!(empirical_rho1(&s[..50], &edges).is_err());
    assert!(empirical_rho1(&[], &edges).is_err());
}

#[test]
fn sampling_is_deterministic() {
    let k = mns_kernel(0.8, 3.0, 1e-12).unwrap();
    assert_eq!(sample_grand_canonical(&k, 9).unwrap(), sample_grand_canonical(&k, 9).unwrap());
    assert_eq!(sample_poisson_exp(-2.0, 4).unwrap(), sample_poisson_exp(-2.0, 4).unwrap());
    assert_eq!(
        sample_shifted_airy_max(1.0, AiryApprox::default(), 3).unwrap(),
        sample_shifted_airy_max(1.0, AiryApprox::default(), 3).unwrap()
    );
}

#[test]
fn poisson_exp_process() {
    let counts: Vec<f64> = (0..10_000u64).map(|s| sample_poisson_exp(0.0, s).unwrap().points.len() as f64).collect();
    assert!((mean(&counts) - 1.0).abs() < 3.0 * standard_error(&counts));

    let maxima: Vec<f64> = (0..10_000u64)
        .map(|s| sample_poisson_exp(-8.0, s).unwrap().points.last().copied().unwrap_or(-8.0))
        .collect();
    assert!(EmpiricalCdf::new(maxima).unwrap().ks(gumbel_cdf) < 0.02);

    let empty: Vec<f64> = (0..10_000u64)
        .map(|s| if sample_poisson_exp(2.0, s).unwrap().points.is_empty() { 1.0 } else { 0.0 })
        .collect();
    let p = (-(-2.0f64).exp()).exp();
    assert!((p - 0.8734).abs() < 1e-4);
    assert!((mean(&empty) - p).abs() < 3.0 * standard_error(&empty));

    let s: Vec<PointConfiguration> = (0..2000u64).map(|i| sample_poisson_exp(-2.0, i).unwrap()).collect();
    let h = empirical_rho1(&s, &uniform_edges(-2.0, 4.0, 12)).unwrap();
    assert!(h.agreement(3.0, |x| (-x).exp()) >= 0.95);
}

#[test]
fn shifted_airy_large_alpha_is_tracy_widom() {
    let tw = tracy_widom_table(&NystromConfig::default()).unwrap();
    let xs: Vec<f64> = (0..4000u64).map(|s| sample_shifted_airy_max(50.0, AiryApprox::default(), s).unwrap()).collect();
    let ks = EmpiricalCdf::new(xs).unwrap().ks(|t| tw.eval(t));
    assert!(ks < 0.05, "{ks}");
}

#[test]
fn shifted_airy_rejects_bad_settings() {
    assert!(sample_shifted_airy_max(0.0, AiryApprox::default(), 1).is_err());
    assert!(sample_shifted_airy_max(1.0, AiryApprox { gue_n: 50, top_k: 10 }, 1).is_err());
    assert!(sample_shifted_airy_max(1.0, AiryApprox { gue_n: 400, top_k: 21 }, 1).is_err());
}

#[test]
fn von_koch_identity() {
    let zero = von_koch_check(|i, j| 0.3 * 0.5f64.powi((i + j) as i32), |_, _| 0.0, [30, 60], 1e-8);
    assert!(zero.passed);
    let diag = von_koch_check(
        |i, j| if i == j { 0.5f64.powi(i as i32) } else { 0.0 },
        |i, j| if i == j { 0.3 * 0.7f64.powi(i as i32) } else { 0.0 },
        [30, 60],
        1e-8,
    );
    let prod: f64 = (0..60).map(|i| 1.0 + 0.5f64.powi(i) + 0.3 * 0.7f64.powi(i) + 0.3 * 0.35f64.powi(i)).product();
    assert!((diag.rhs[1] - prod).abs() < 1e-10 * prod);
    let r = von_koch_check(
        |i, j| 0.8 * 2f64.powi(-((i + j) as i32)),
        |i, j| -0.6 * 2f64.powi(-((i + j) as i32)) * if (i + j) % 2 == 0 { 1.0 } else { -1.0 },
        [30, 60],
        1e-8,
    );
    assert!(r.passed, "{r:?}");
}

#[test]
fn cdf_table_matches_direct_values_for_sampler_checks() {
    let t = CdfTable::build(-2.0, 2.0, |x| Ok(gumbel_cdf(x))).unwrap();
    for x in [-1.7, -0.3, 0.0, 1.234] {
        assert!((t.eval(x) - gumbel_cdf(x)).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn configurations_are_sorted_and_finite(seed in any::<u64>(), mu in 0.2f64..2.0, lambda in 0.5f64..20.0) {
        let k = mns_kernel((-mu).exp(), lambda, 1e-10).unwrap();
        let c = sample_grand_canonical(&k, seed).unwrap();
        prop_assert!(c.points.iter().all(|x| x.is_finite()));
        prop_assert!(c.points.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(c.seed, seed);
    }

    #[test]
    fn poisson_points_exceed_threshold(seed in any::<u64>(), t in -4.0f64..3.0) {
        let c = sample_poisson_exp(t, seed).unwrap();
        prop_assert!(c.points.iter().all(|&x| x > t));
    }
}
