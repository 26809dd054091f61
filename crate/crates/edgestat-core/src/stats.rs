//! Empirical distributions and the goodness-of-fit measures used by the experiments.

use crate::error::{Error, Result};
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Sorted finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut sample: Vec<f64>) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::Config("empty sample".into()));
        }
        if sample.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite value in sample".into()));
        }
        sample.sort_by(|a, b| a.total_cmp(b));
        Ok(EmpiricalCdf { sorted: sample })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of the sample <= x.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// sup_x |F_n(x) - F(x)| for a continuous F.
    pub fn ks(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let n = self.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).max((i + 1) as f64 / n - f)
            })
            .fold(0.0, f64::max)
    }

    /// Two-sample Kolmogorov-Smirnov distance.
    pub fn ks_two_sample(&self, other: &EmpiricalCdf) -> f64 {
        let (a, b) = (&self.sorted, &other.sorted);
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let (mut i, mut j, mut d) = (0, 0, 0.0f64);
        while i < a.len() && j < b.len() {
            let x = a[i].min(b[j]);
            while i < a.len() && a[i] <= x {
                i += 1;
            }
            while j < b.len() && b[j] <= x {
                j += 1;
            }
            d = d.max((i as f64 / na - j as f64 / nb).abs());
        }
        d
    }

    /// Lower empirical quantile.
    pub fn quantile(&self, p: f64) -> f64 {
        let k = ((p * self.len() as f64).ceil() as usize).clamp(1, self.len());
        self.sorted[k - 1]
    }

    pub fn median(&self) -> f64 {
        let n = self.len();
        if n % 2 == 1 {
            self.sorted[n / 2]
        } else {
            0.5 * (self.sorted[n / 2 - 1] + self.sorted[n / 2])
        }
    }

    pub fn mean(&self) -> f64 {
        mean(&self.sorted)
    }

    pub fn variance(&self) -> f64 {
        variance(&self.sorted)
    }

    /// Dvoretzky-Kiefer-Wolfowitz half-width at confidence 1 - level.
    pub fn dkw_band(&self, level: f64) -> f64 {
        ((2.0 / level).ln() / (2.0 * self.len() as f64)).sqrt()
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Standard error of the mean.
pub fn standard_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Law of a sum of independent Bernoulli(p_n), by exact convolution.
pub fn poisson_binomial(ps: &[f64]) -> Vec<f64> {
    let mut dist = alloc::vec![1.0];
    for &p in ps {
        let mut next = alloc::vec![0.0; dist.len() + 1];
        for (k, &d) in dist.iter().enumerate() {
            next[k] += d * (1.0 - p);
            next[k + 1] += d * p;
        }
        dist = next;
    }
    dist
}

/// Total variation distance between two laws on 0, 1, 2, ...
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    0.5 * (0..n)
        .map(|k| (p.get(k).copied().unwrap_or(0.0) - q.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

/// Empirical law of nonnegative integer counts.
pub fn count_frequencies(counts: &[usize]) -> Vec<f64> {
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut f = alloc::vec![0.0; max + 1];
    for &c in counts {
        f[c] += 1.0;
    }
    let n = counts.len() as f64;
    f.iter_mut().for_each(|v| *v /= n);
    f
}

/// Index of the bin [edges[i], edges[i+1]) containing x.
pub fn bin_index(edges: &[f64], x: f64) -> Option<usize> {
    if edges.len() < 2 || x < edges[0] || x >= *edges.last().unwrap() {
        return None;
    }
    Some(edges.partition_point(|&e| e <= x) - 1)
}

/// Evenly spaced bin edges.
pub fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    (0..=bins).map(|i| lo + (hi - lo) * i as f64 / bins as f64).collect()
}
