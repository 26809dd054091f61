use edgestat_core::exec::*;
use edgestat_core::stats::*;
use proptest::prelude::*;
use rand_core::RngCore;

#[test]
fn empirical_cdf_basics() {
    let e = EmpiricalCdf::new(vec![3.0, 1.0, 2.0, 4.0]).unwrap();
    assert_eq!(e.values(), &[1.0, 2.0, 3.0, 4.0]);
    assert_eq!(e.eval(2.5), 0.5);
    assert_eq!(e.median(), 2.5);
    assert_eq!(e.quantile(0.5), 2.0);
    assert_eq!(e.mean(), 2.5);
    assert!((e.variance() - 5.0 / 3.0).abs() < 1e-15);
    // uniform CDF on [0.5, 4.5]
    let ks = e.ks(|x| ((x - 0.5) / 4.0).clamp(0.0, 1.0));
    assert!((ks - 0.125).abs() < 1e-15);
    assert!(EmpiricalCdf::new(vec![]).is_err());
    assert!(EmpiricalCdf::new(vec![1.0, f64::NAN]).is_err());
}

#[test]
fn two_sample_ks() {
    let a = EmpiricalCdf::new(vec![1.0, 2.0, 3.0]).unwrap();
    let b = EmpiricalCdf::new(vec![10.0, 11.0]).unwrap();
    assert_eq!(a.ks_two_sample(&b), 1.0);
    assert_eq!(a.ks_two_sample(&a), 0.0);
}

#[test]
fn poisson_binomial_small_case() {
    let d = poisson_binomial(&[0.5, 0.25]);
    assert_eq!(d, vec![0.375, 0.5, 0.125]);
    assert_eq!(poisson_binomial(&[]), vec![1.0]);
}

#[test]
fn frequencies_and_bins() {
    assert_eq!(count_frequencies(&[0, 2, 2, 1]), vec![0.25, 0.25, 0.5]);
    let e = uniform_edges(0.0, 1.0, 4);
    assert_eq!(e.len(), 5);
    assert_eq!(bin_index(&e, 0.3), Some(1));
    assert_eq!(bin_index(&e, 0.99), Some(3));
    assert_eq!(bin_index(&e, 1.0), None);
    assert_eq!(bin_index(&e, -0.1), None);
    assert_eq!(total_variation(&[0.5, 0.5], &[1.0]), 0.5);
}

#[test]
fn replica_seeds() {
    assert_eq!(replica_seed(u64::MAX, 2), 1);
    assert_eq!(replica_rng(5, 3).next_u64(), replica_rng(8, 0).next_u64());
    let out = Serial.run(5, |i| i * i);
    assert_eq!(out, vec![0, 1, 4, 9, 16]);
}

proptest! {
    #[test]
    fn poisson_binomial_is_a_law(ps in prop::collection::vec(0.0f64..=1.0, 0..40)) {
        let d = poisson_binomial(&ps);
        prop_assert_eq!(d.len(), ps.len() + 1);
        prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let m: f64 = d.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        prop_assert!((m - ps.iter().sum::<f64>()).abs() < 1e-10);
    }

    #[test]
    fn ks_is_a_distance(xs in prop::collection::vec(-5.0f64..5.0, 1..60)) {
        let e = EmpiricalCdf::new(xs).unwrap();
        let ks = e.ks(|x| 1.0 / (1.0 + (-x).exp()));
        prop_assert!((0.0..=1.0).contains(&ks));
        prop_assert!(ks >= 0.5 / e.len() as f64 - 1e-15);
    }
}
