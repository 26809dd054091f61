//! Exact sampling of spectral determinantal processes, the Poisson edge process,
//! and the logistic-shifted Airy maximum.

use crate::error::{domain, Error, Result};
use crate::exec::replica_rng;
use crate::kernels::SpectralKernel;
use crate::rmt::{edge_scale, gue_top_eigenvalues};
use crate::stats::{bin_index, mean, standard_error};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Open01, Poisson};
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// One sampled configuration, sorted ascending, with the seed that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    pub points: Vec<f64>,
    pub seed: u64,
    pub meta: String,
}

/// Law of the particle count.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    pub probabilities: Vec<f64>,
}

impl CountDistribution {
    pub fn of(kernel: &SpectralKernel) -> Self {
        CountDistribution { probabilities: crate::stats::poisson_binomial(kernel.weights()) }
    }

    pub fn mean(&self) -> f64 {
        self.probabilities.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    Open01.sample(rng)
}

const MIN_ACCEPTANCE: f64 = 1e-4;
const MIN_CELLS: usize = 512;

/// Sequential sampler for the projection process spanned by selected basis functions.
struct ProjectionSampler<'a> {
    kernel: &'a SpectralKernel,
    selected: Vec<usize>,
    lo: f64,
    width: f64,
    cell_bound: Vec<f64>,
    cell_cdf: Vec<f64>,
}

impl<'a> ProjectionSampler<'a> {
    fn new(kernel: &'a SpectralKernel, selected: Vec<usize>) -> Self {
        let top = *selected.last().unwrap();
        let beta = kernel.basis().beta();
        let r = (((2 * top) as f64).sqrt() + 4.0) / beta;
        // cells stay below 1/16 of the shortest oscillation of psi_top
        let wavelength = 2.0 * core::f64::consts::PI / (beta * ((2 * top + 1) as f64).sqrt());
        let cells = MIN_CELLS.max((32.0 * r / wavelength).ceil() as usize);
        let width = 2.0 * r / cells as f64;
        let mut s = ProjectionSampler {
            kernel,
            selected,
            lo: -r,
            width,
            cell_bound: Vec::with_capacity(cells),
            cell_cdf: Vec::with_capacity(cells),
        };
        let mut buf = vec![0.0; top + 1];
        let mut acc = 0.0;
        for c in 0..cells {
            let a = s.lo + c as f64 * width;
            let m = (0..=4)
                .map(|k| s.norm2(a + width * k as f64 / 4.0, &mut buf))
                .fold(0.0, f64::max);
            let b = 1.25 * m + 1e-300;
            s.cell_bound.push(b);
            acc += b * width;
            s.cell_cdf.push(acc);
        }
        s
    }

    fn values(&self, x: f64, buf: &mut [f64]) -> Vec<f64> {
        // buf holds psi_0..psi_top
        self.kernel.basis().psi_all(x, buf).expect("selected indices lie in the basis");
        self.selected.iter().map(|&n| buf[n]).collect()
    }

    fn norm2(&self, x: f64, buf: &mut [f64]) -> f64 {
        self.values(x, buf).iter().map(|v| v * v).sum()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let k = self.selected.len();
        let total = *self.cell_cdf.last().unwrap();
        let mut buf = vec![0.0; *self.selected.last().unwrap() + 1];
        // orthonormal basis of the span of v(x_1), ..., v(x_i) in R^k
        let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut points = Vec::with_capacity(k);
        let (mut proposals, mut accepted) = (0u64, 0u64);
        while points.len() < k {
            let u = uniform(rng) * total;
            let c = self.cell_cdf.partition_point(|&v| v < u).min(self.cell_cdf.len() - 1);
            let x = self.lo + (c as f64 + uniform(rng)) * self.width;
            proposals += 1;
            let mut v = self.values(x, &mut buf);
            let full: f64 = v.iter().map(|a| a * a).sum();
            if full > self.cell_bound[c] {
                return Err(Error::Numeric(format!(
                    "proposal envelope below density at x = {x}: {full:e} > {:e}",
                    self.cell_bound[c]
                )));
            }
            for e in &ortho {
                let d: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(e).for_each(|(a, b)| *a -= d * b);
            }
            let cond: f64 = v.iter().map(|a| a * a).sum();
            if uniform(rng) * self.cell_bound[c] < cond {
                accepted += 1;
                points.push(x);
                let norm = cond.sqrt();
                // one more pass keeps the basis orthonormal to rounding
                for e in &ortho {
                    let d: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(e).for_each(|(a, b)| *a -= d * b);
                }
                let n2: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt().max(norm * 1e-300);
                ortho.push(v.iter().map(|a| a / n2).collect());
            }
            if proposals > 10_000 && (accepted as f64) < MIN_ACCEPTANCE * proposals as f64 {
                return Err(Error::SamplerStall {
                    drawn: points.len(),
                    total: k,
                    proposals,
                    accepted,
                });
            }
        }
        points.sort_by(|a, b| a.total_cmp(b));
        Ok(points)
    }
}

/// Draws one configuration of the determinantal process with kernel
/// sum_n p_n psi_n(x) psi_n(y): indices kept with probability p_n, then the
/// projection process of the kept basis functions by sequential rejection sampling.
pub fn sample_grand_canonical(kernel: &SpectralKernel, seed: u64) -> Result<PointConfiguration> {
    let mut rng = replica_rng(seed, 0);
    let selected: Vec<usize> = kernel
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, &p)| uniform(&mut rng) < p)
        .map(|(n, _)| n)
        .collect();
    let points = if selected.is_empty() {
        Vec::new()
    } else {
        ProjectionSampler::new(kernel, selected).sample(&mut rng)?
    };
    Ok(PointConfiguration { points, seed, meta: kernel_label(kernel) })
}

fn kernel_label(kernel: &SpectralKernel) -> String {
    use crate::kernels::Kernel;
    kernel.label()
}

/// Poisson process of intensity e^{-x} on (t_min, inf).
pub fn sample_poisson_exp(t_min: f64, seed: u64) -> Result<PointConfiguration> {
    if !t_min.is_finite() {
        return Err(domain("sample_poisson_exp t_min", t_min));
    }
    let mut rng = replica_rng(seed, 0);
    let mean_count = (-t_min).exp();
    let count = if mean_count > 0.0 {
        let d = Poisson::new(mean_count).map_err(|e| Error::Config(format!("{e}")))?;
        let c: f64 = d.sample(&mut rng);
        c as usize
    } else {
        0
    };
    let mut points: Vec<f64> = (0..count).map(|_| t_min - uniform(&mut rng).ln()).collect();
    points.sort_by(|a, b| a.total_cmp(b));
    Ok(PointConfiguration { points, seed, meta: format!("poisson_exp(t_min={t_min})") })
}

/// Settings of the finite-n Airy approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryApprox {
    pub gue_n: usize,
    pub top_k: usize,
}

impl Default for AiryApprox {
    fn default() -> Self {
        AiryApprox { gue_n: 400, top_k: 10 }
    }
}

/// max_j (x_j + y_j) with x_j the top edge-rescaled GUE eigenvalues and y_j
/// independent logistic(alpha) variables.
pub fn sample_shifted_airy_max(alpha: f64, approx: AiryApprox, seed: u64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain("shifted Airy alpha", alpha));
    }
    if approx.gue_n < 100 || approx.top_k == 0 || approx.top_k > 20 {
        return Err(Error::Config(format!(
            "shifted Airy needs gue_n >= 100 and 1 <= top_k <= 20, got {approx:?}"
        )));
    }
    let mut rng = replica_rng(seed, 0);
    let eigs = gue_top_eigenvalues(approx.gue_n, approx.top_k, &mut rng)?;
    Ok(eigs
        .iter()
        .map(|&l| {
            let u = uniform(&mut rng);
            edge_scale(l, approx.gue_n) + (u / (1.0 - u)).ln() / alpha
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// One-point density estimate per bin with Monte Carlo standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct Rho1Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub std_err: Vec<f64>,
}

impl Rho1Histogram {
    /// Fraction of bins whose estimate lies within `sigmas` standard errors of
    /// the bin average of `rho`.
    pub fn agreement(&self, sigmas: f64, rho: impl Fn(f64) -> f64) -> f64 {
        let rule = crate::quad::QuadratureRule::gauss_legendre(8);
        let mut ok = 0;
        for b in 0..self.density.len() {
            let (a, c) = (self.edges[b], self.edges[b + 1]);
            let avg = rule.mapped(a, c).integrate(&rho) / (c - a);
            // an empty bin with zero error agrees only with a negligible density
            let tol = (sigmas * self.std_err[b]).max(1e-12);
            if (self.density[b] - avg).abs() <= tol {
                ok += 1;
            }
        }
        ok as f64 / self.density.len() as f64
    }
}

fn per_sample_bins(samples: &[PointConfiguration], edges: &[f64]) -> Vec<Vec<f64>> {
    let bins = edges.len() - 1;
    samples
        .iter()
        .map(|s| {
            let mut c = vec![0.0; bins];
            for &x in &s.points {
                if let Some(b) = bin_index(edges, x) {
                    c[b] += 1.0;
                }
            }
            c
        })
        .collect()
}

/// Mean count per bin divided by the bin width.
pub fn empirical_rho1(samples: &[PointConfiguration], edges: &[f64]) -> Result<Rho1Histogram> {
    if samples.is_empty() {
        return Err(Error::Config("empirical_rho1 needs samples".into()));
    }
    if samples.len() < 100 {
        return Err(Error::Config(format!("empirical_rho1 needs >= 100 samples, got {}", samples.len())));
    }
    if edges.len() < 2 {
        return Err(Error::Config("need at least one bin".into()));
    }
    let counts = per_sample_bins(samples, edges);
    let bins = edges.len() - 1;
    let mut density = Vec::with_capacity(bins);
    let mut std_err = Vec::with_capacity(bins);
    for b in 0..bins {
        let col: Vec<f64> = counts.iter().map(|c| c[b]).collect();
        let w = edges[b + 1] - edges[b];
        density.push(mean(&col) / w);
        std_err.push(standard_error(&col) / w);
    }
    Ok(Rho1Histogram { edges: edges.to_vec(), density, std_err })
}

/// Two-point estimate on coarse bins: E[#pairs in A x B] / (|A||B|) minus the
/// product of one-point estimates, with a standard error for the difference.
#[derive(Debug, Clone, PartialEq)]
pub struct PairExcess {
    pub excess: DMatrix<f64>,
    pub std_err: DMatrix<f64>,
}

pub fn empirical_pair_excess(samples: &[PointConfiguration], edges: &[f64]) -> Result<PairExcess> {
    if samples.len() < 100 || edges.len() < 2 {
        return Err(Error::Config("pair estimate needs >= 100 samples and one bin".into()));
    }
    let counts = per_sample_bins(samples, edges);
    let bins = edges.len() - 1;
    let n = samples.len() as f64;
    let mut excess = DMatrix::zeros(bins, bins);
    let mut std_err = DMatrix::zeros(bins, bins);
    for a in 0..bins {
        for b in 0..bins {
            let wa = edges[a + 1] - edges[a];
            let wb = edges[b + 1] - edges[b];
            let ma = counts.iter().map(|c| c[a]).sum::<f64>() / n;
            let mb = counts.iter().map(|c| c[b]).sum::<f64>() / n;
            // delta-method influence of each sample on pairs - ma*mb
            let infl: Vec<f64> = counts
                .iter()
                .map(|c| {
                    let pairs = if a == b { c[a] * (c[a] - 1.0) } else { c[a] * c[b] };
                    pairs - mb * c[a] - ma * c[b]
                })
                .collect();
            let pairs_mean = counts
                .iter()
                .map(|c| if a == b { c[a] * (c[a] - 1.0) } else { c[a] * c[b] })
                .sum::<f64>()
                / n;
            excess[(a, b)] = (pairs_mean - ma * mb) / (wa * wb);
            std_err[(a, b)] = standard_error(&infl) / (wa * wb);
        }
    }
    Ok(PairExcess { excess, std_err })
}

/// Keeps each point independently with probability `keep`.
pub fn thin(config: &PointConfiguration, keep: f64, seed: u64) -> PointConfiguration {
    let mut rng = replica_rng(seed, 0);
    PointConfiguration {
        points: config.points.iter().copied().filter(|_| uniform(&mut rng) < keep).collect(),
        seed: config.seed,
        meta: format!("{} thinned({keep})", config.meta),
    }
}

/// det(I + A) det(I + B) against det(I + A + B + AB) at two truncation sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct VonKochReport {
    pub sizes: [usize; 2],
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub max_error: f64,
    pub passed: bool,
}

pub fn von_koch_check(
    a: impl Fn(usize, usize) -> f64,
    b: impl Fn(usize, usize) -> f64,
    sizes: [usize; 2],
    tol: f64,
) -> VonKochReport {
    let big = sizes[0].max(sizes[1]);
    let am = DMatrix::from_fn(big, big, &a);
    let bm = DMatrix::from_fn(big, big, &b);
    let ab = &am * &bm;
    let mut lhs = [0.0; 2];
    let mut rhs = [0.0; 2];
    for (s, &n) in sizes.iter().enumerate() {
        let id = DMatrix::<f64>::identity(n, n);
        let an = am.view((0, 0), (n, n)).into_owned();
        let bn = bm.view((0, 0), (n, n)).into_owned();
        let abn = ab.view((0, 0), (n, n)).into_owned();
        lhs[s] = (&id + &an).determinant() * (&id + &bn).determinant();
        rhs[s] = (&id + an + bn + abn).determinant();
    }
    let max_error = (0..2).map(|s| (lhs[s] - rhs[s]).abs()).fold((lhs[0] - lhs[1]).abs(), f64::max);
    VonKochReport { sizes, lhs, rhs, max_error, passed: max_error < tol }
}
