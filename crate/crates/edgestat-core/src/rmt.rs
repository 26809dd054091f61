//! GUE and deformed-GUE Monte Carlo, classical Gumbel maxima, and the
//! centering constants of the deformed edge.

use crate::error::{domain, Error, Result};
use crate::exec::{replica_rng, replica_seed, ReplicaExecutor};
use crate::fredholm::CdfTable;
use crate::linalg::{hermitian_eigenvalues, tridiagonal_top_eigenvalues};
use crate::quad::QuadratureRule;
use crate::specfun::{gumbel_cdf, gumbel_scaling, GumbelScaling, GumbelVariant};
use crate::stats::{mean, standard_error, variance, EmpiricalCdf};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal, Open01, StandardNormal};
#[cfg(not(feature = "std"))]
use num_traits::Float;

fn gue_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        let d: f64 = StandardNormal.sample(rng);
        m[(i, i)] = Complex64::new(d * FRAC_1_SQRT_2, 0.0);
        for j in i + 1..n {
            let (re, im): (f64, f64) = (StandardNormal.sample(rng), StandardNormal.sample(rng));
            let z = Complex64::new(0.5 * re, 0.5 * im);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Eigenvalues, ascending, of a GUE(n) matrix with density proportional to
/// exp(-tr V^2): diagonal N(0, 1/2), off-diagonal real and imaginary parts N(0, 1/4).
pub fn sample_gue_eigs(n: usize, seed: u64) -> Result<Vec<f64>> {
    if !(2..=2000).contains(&n) {
        return Err(Error::Config(format!("GUE size {n} outside 2..=2000")));
    }
    let mut rng = replica_rng(seed, 0);
    let eigs = hermitian_eigenvalues(gue_matrix(n, &mut rng));
    if eigs.len() != n || eigs.iter().any(|e| !e.is_finite()) {
        return Err(Error::Numeric("eigensolver failure".into()));
    }
    Ok(eigs)
}

/// Top `k` eigenvalues, descending, of the same GUE law from its tridiagonal
/// model: diagonal N(0, 1/2), squared off-diagonals Gamma(n - i, 1/2).
pub fn gue_top_eigenvalues(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    if n < 2 || k == 0 || k > n {
        return Err(Error::Config(format!("need 2 <= n and 1 <= k <= n, got n={n}, k={k}")));
    }
    let normal = Normal::new(0.0, FRAC_1_SQRT_2).unwrap();
    let d: Vec<f64> = (0..n).map(|_| normal.sample(rng)).collect();
    let e2: Vec<f64> = (1..n)
        .map(|i| Gamma::new((n - i) as f64, 0.5).unwrap().sample(rng))
        .collect();
    Ok(tridiagonal_top_eigenvalues(&d, &e2, k))
}

/// sqrt(2) n^{1/6} (lambda - sqrt(2n)).
pub fn edge_scale(lambda: f64, n: usize) -> f64 {
    SQRT_2 * (n as f64).powf(1.0 / 6.0) * (lambda - (2.0 * n as f64).sqrt())
}

/// Edge-rescaled largest eigenvalue.
pub fn edge_rescale(eigs: &[f64], n: usize) -> f64 {
    edge_scale(eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max), n)
}

/// Law of the diagonal entries y_j: mean zero, finite seventh moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiagLaw {
    Gaussian { variance: f64 },
    Uniform { half_width: f64 },
    /// +-scale with probability 1/2 each.
    Rademacher { scale: f64 },
    /// Degenerate law at 0.
    PointMass,
}

impl DiagLaw {
    pub fn variance(&self) -> f64 {
        match *self {
            DiagLaw::Gaussian { variance } => variance,
            DiagLaw::Uniform { half_width } => half_width * half_width / 3.0,
            DiagLaw::Rademacher { scale } => scale * scale,
            DiagLaw::PointMass => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let p = match *self {
            DiagLaw::Gaussian { variance } => variance,
            DiagLaw::Uniform { half_width } => half_width,
            DiagLaw::Rademacher { scale } => scale,
            DiagLaw::PointMass => return Ok(()),
        };
        if !(p > 0.0 && p.is_finite()) {
            return Err(domain("diagonal law parameter", p));
        }
        Ok(())
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            DiagLaw::Gaussian { variance } => {
                let z: f64 = StandardNormal.sample(rng);
                z * variance.sqrt()
            }
            DiagLaw::Uniform { half_width } => {
                let u: f64 = Open01.sample(rng);
                half_width * (2.0 * u - 1.0)
            }
            DiagLaw::Rademacher { scale } => {
                let u: f64 = Open01.sample(rng);
                if u < 0.5 { -scale } else { scale }
            }
            DiagLaw::PointMass => 0.0,
        }
    }

    /// Largest |t| in the support of the law cut off at `cutoff`.
    fn edge(&self, cutoff: f64) -> f64 {
        match *self {
            DiagLaw::Gaussian { .. } => cutoff,
            DiagLaw::Uniform { half_width } => half_width.min(cutoff),
            DiagLaw::Rademacher { scale } => scale,
            DiagLaw::PointMass => 0.0,
        }
    }

    /// Expectation of f under the law conditioned on |t| <= cutoff, with `pole`
    /// a point outside the support near which f may be singular.
    fn expect_cut(&self, cutoff: f64, pole: f64, f: impl Fn(f64) -> f64) -> f64 {
        match *self {
            DiagLaw::PointMass => f(0.0),
            DiagLaw::Rademacher { scale } => 0.5 * (f(-scale) + f(scale)),
            DiagLaw::Gaussian { variance } => {
                let sd = variance.sqrt();
                let dens = |t: f64| (-t * t / (2.0 * variance)).exp();
                graded_ratio(-cutoff, cutoff, sd / 4.0, pole, |t| dens(t) * f(t), dens)
            }
            DiagLaw::Uniform { half_width } => {
                let a = half_width.min(cutoff);
                graded_ratio(-a, a, a / 8.0, pole, f, |_| 1.0)
            }
        }
    }
}

/// int_a^b num / int_a^b den on panels graded toward a pole outside [a, b].
fn graded_ratio(a: f64, b: f64, h: f64, pole: f64, num: impl Fn(f64) -> f64, den: impl Fn(f64) -> f64) -> f64 {
    let rule = QuadratureRule::adaptive_panels(a, b, |t| h.min(0.5 * (pole - t).abs()).max(1e-9));
    rule.integrate(num) / rule.integrate(den)
}

/// Deformed GUE diag(y) + sqrt(2S) V with S = alpha^2 / n^{2/3}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedModel {
    pub n: usize,
    pub alpha: f64,
    pub law: DiagLaw,
    pub epsilon: f64,
}

/// Default cutoff exponent.
pub const DEFAULT_EPSILON: f64 = 0.15;

impl DeformedModel {
    pub fn new(n: usize, alpha: f64, law: DiagLaw, epsilon: f64) -> Result<Self> {
        if !(2..=1000).contains(&n) {
            return Err(Error::Config(format!("deformed model size {n} outside 2..=1000")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain("deformed model alpha", alpha));
        }
        if !(epsilon > 1.0 / 7.0 && epsilon < 1.0 / 6.0) {
            return Err(domain("cutoff exponent epsilon (must lie in (1/7, 1/6))", epsilon));
        }
        law.validate()?;
        Ok(DeformedModel { n, alpha, law, epsilon })
    }

    pub fn s(&self) -> f64 {
        self.alpha * self.alpha / (self.n as f64).powf(2.0 / 3.0)
    }

    /// N^epsilon.
    pub fn cutoff(&self) -> f64 {
        (self.n as f64).powf(self.epsilon)
    }

    fn target(&self) -> f64 {
        1.0 / (self.alpha * self.alpha * (self.n as f64).powf(1.0 / 3.0))
    }

    fn g_prime(&self, w: f64) -> f64 {
        -self.law.expect_cut(self.cutoff(), w, |t| 1.0 / ((w - t) * (w - t)))
    }

    fn g_second(&self, w: f64) -> f64 {
        2.0 * self.law.expect_cut(self.cutoff(), w, |t| 1.0 / ((w - t) * (w - t) * (w - t)))
    }

    /// The same law and parameters at another size.
    pub fn resized(&self, n: usize) -> Result<Self> {
        Self::new(n, self.alpha, self.law, self.epsilon)
    }
}

/// Largest eigenvalue of diag(y) + sqrt(2s) V for a fresh GUE V; max y when s = 0.
pub fn deformed_lambda_max(y: &[f64], s: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(domain("deformed S", s));
    }
    if s == 0.0 {
        return Ok(y.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }
    let n = y.len();
    let mut m = gue_matrix(n, rng);
    m *= Complex64::new((2.0 * s).sqrt(), 0.0);
    for i in 0..n {
        m[(i, i)] += y[i];
    }
    match hermitian_eigenvalues(m).last() {
        Some(&l) if l.is_finite() => Ok(l),
        _ => Err(Error::Numeric("eigensolver failure".into())),
    }
}

/// Draws y from the full law and returns (lambda_max, y).
pub fn sample_deformed_max(model: &DeformedModel, seed: u64) -> Result<(f64, Vec<f64>)> {
    let mut rng = replica_rng(seed, 0);
    let y: Vec<f64> = (0..model.n).map(|_| model.law.sample(&mut rng)).collect();
    let l = deformed_lambda_max(&y, model.s(), &mut rng)?;
    Ok((l, y))
}

/// Root of G_N'(w) = -1/(alpha^2 N^{1/3}) to the right of the cut-off support.
///
/// G_N' increases from -inf at the support edge to 0 at infinity, so the root
/// is bracketed by the edge and a doubling search, then polished by Newton
/// steps kept inside the bracket.
pub fn solve_wc(model: &DeformedModel) -> Result<f64> {
    let target = model.target();
    let g = |w: f64| model.g_prime(w) + target;
    let edge = model.law.edge(model.cutoff());
    let mut lo = edge + 1e-9 * (1.0 + edge);
    if !(g(lo) < 0.0) {
        return Err(Error::Config(format!("no sign change of G_N' + 1/(alpha^2 N^(1/3)) at the support edge {edge}")));
    }
    let mut hi = edge + 1.0 / target.sqrt();
    let mut n = 0;
    while g(hi) <= 0.0 {
        hi = edge + 2.0 * (hi - edge);
        n += 1;
        if n > 200 {
            return Err(Error::Config("no upper bracket for w_c".into()));
        }
    }
    let mut w = 0.5 * (lo + hi);
    for _ in 0..200 {
        let v = g(w);
        if v.abs() < 1e-14 * target.max(1.0) {
            break;
        }
        if v < 0.0 {
            lo = w;
        } else {
            hi = w;
        }
        let step = w - v / model.g_second(w);
        w = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    if !(g(w).abs() < 1e-10) {
        return Err(Error::Numeric(format!("w_c residual {:e}", g(w))));
    }
    Ok(w)
}

/// Constants of the model needed for every replica's centering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedConstants {
    pub w_c: f64,
    /// G_N'(w_c).
    pub g1: f64,
    /// int y / (w_c - y) dmu_N.
    pub mean_term: f64,
    pub r_of_n: f64,
}

/// w_c, G_N'(w_c) and R(N) = w_c + a/w_c + (a/w_c) int y/(w_c - y) dmu_N with a = alpha^2 N^{1/3}.
pub fn deformed_constants(model: &DeformedModel) -> Result<DeformedConstants> {
    let w = solve_wc(model)?;
    let mean_term = model.law.expect_cut(model.cutoff(), w, |t| t / (w - t));
    let a = model.alpha * model.alpha * (model.n as f64).powf(1.0 / 3.0);
    Ok(DeformedConstants {
        w_c: w,
        g1: model.g_prime(w),
        mean_term,
        r_of_n: w + a / w + a / w * mean_term,
    })
}

/// R(N).
pub fn r_of_n(model: &DeformedModel) -> Result<f64> {
    Ok(deformed_constants(model)?.r_of_n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenteringData {
    pub w_c: f64,
    pub v_c: f64,
    pub r_of_n: f64,
    pub s_n_value: f64,
    /// r_N(y) = -sum 1/(w_c - y_j)^2 - N G_N'(w_c), centered under mu_N.
    pub r_n: f64,
    /// |v_c - R(N) - (alpha/sqrt N) s_N|.
    pub identity_error: f64,
}

/// v_c = w_c + S sum 1/(w_c - y_j), s_N = (alpha/(w_c N^{1/6})) (sum y_j/(w_c - y_j) - N int y/(w_c - y) dmu_N).
pub fn centering(model: &DeformedModel, k: &DeformedConstants, y: &[f64]) -> Result<CenteringData> {
    let cut = model.cutoff();
    for (index, &v) in y.iter().enumerate() {
        if !(v.abs() <= cut) || v >= k.w_c {
            return Err(Error::Cutoff { index, value: v, wc: k.w_c });
        }
    }
    let n = model.n as f64;
    let w = k.w_c;
    let v_c = w + model.s() * y.iter().map(|&t| 1.0 / (w - t)).sum::<f64>();
    let sum_ratio: f64 = y.iter().map(|&t| t / (w - t)).sum();
    let s_n = model.alpha / (w * n.powf(1.0 / 6.0)) * (sum_ratio - n * k.mean_term);
    let r_n = -y.iter().map(|&t| 1.0 / ((w - t) * (w - t))).sum::<f64>() - n * k.g1;
    let identity_error = (v_c - k.r_of_n - model.alpha / n.sqrt() * s_n).abs();
    Ok(CenteringData { w_c: w, v_c, r_of_n: k.r_of_n, s_n_value: s_n, r_n, identity_error })
}

/// Exact variance of s_N under mu_N.
pub fn s_n_variance(model: &DeformedModel, k: &DeformedConstants) -> f64 {
    let w = k.w_c;
    let m2 = model.law.expect_cut(model.cutoff(), w, |t| (t / (w - t)).powi(2));
    let n = model.n as f64;
    model.alpha * model.alpha * n.powf(2.0 / 3.0) / (w * w) * (m2 - k.mean_term * k.mean_term)
}

/// P[X + Y <= t] for X ~ F_TW (tabulated) and Y ~ N(0, s^2).
pub fn tw_gauss_convolution_cdf(tw: &CdfTable, s: f64, t: f64) -> f64 {
    if s < 1e-12 {
        return tw.eval(t);
    }
    let h = (0.5 * s).min(0.25);
    let panels = ((24.0 * s / h).ceil() as usize).max(48);
    let rule = QuadratureRule::composite(-12.0 * s, 12.0 * s, panels, 16);
    let c = 1.0 / (s * (2.0 * PI).sqrt());
    rule.integrate(|u| tw.eval(t - u) * c * (-u * u / (2.0 * s * s)).exp())
}

/// CDF of N(0, s^2).
pub fn gaussian_cdf(s: f64, t: f64) -> f64 {
    0.5 * libm::erfc(-t / (s * SQRT_2))
}

/// Outcome of the deformed-edge experiment at one size.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedRun {
    pub n: usize,
    pub replicas: usize,
    pub w_c: f64,
    pub r_of_n: f64,
    /// (lambda_max - R(N)) / (alpha / sqrt N) per replica.
    pub statistics: Vec<f64>,
    pub ks_convolution: f64,
    pub ks_tw: f64,
    pub ks_gaussian: f64,
    /// Sample variance of s_N over replicas inside the cut-off set.
    pub var_s_n: f64,
    pub exact_var_s_n: f64,
    pub mean_r_n: f64,
    pub se_r_n: f64,
    pub max_identity_error: f64,
    pub cutoff_violations: usize,
}

impl DeformedRun {
    pub fn violation_fraction(&self) -> f64 {
        self.cutoff_violations as f64 / self.replicas as f64
    }
}

/// Runs `replicas` deformed draws at the model's size and compares the
/// centered maximum with the Tracy-Widom * Gaussian convolution.
///
/// lambda_max always uses y from the full law. Replicas with y outside the
/// cut-off set are counted and excluded only from the s_N and r_N statistics.
pub fn deformed_run<E: ReplicaExecutor>(
    model: &DeformedModel,
    replicas: usize,
    seed: u64,
    exec: &E,
    tw: &CdfTable,
) -> Result<DeformedRun> {
    if replicas == 0 {
        return Err(Error::Config("need at least one replica".into()));
    }
    let k = deformed_constants(model)?;
    let scale = model.alpha / (model.n as f64).sqrt();
    let rows = exec.run(replicas, |i| -> Result<(f64, Option<CenteringData>)> {
        let (l, y) = sample_deformed_max(model, replica_seed(seed, i as u64))?;
        let c = match centering(model, &k, &y) {
            Ok(c) => Some(c),
            Err(Error::Cutoff { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(((l - k.r_of_n) / scale, c))
    });
    let mut statistics = Vec::with_capacity(replicas);
    let mut cents = Vec::new();
    for r in rows {
        let (s, c) = r?;
        statistics.push(s);
        if let Some(c) = c {
            cents.push(c);
        }
    }
    let sd = model.law.variance().sqrt() / model.alpha;
    let ecdf = EmpiricalCdf::new(statistics.clone())?;
    let s_vals: Vec<f64> = cents.iter().map(|c| c.s_n_value).collect();
    let r_vals: Vec<f64> = cents.iter().map(|c| c.r_n).collect();
    let (var_s_n, mean_r_n, se_r_n) = if cents.len() >= 2 {
        (variance(&s_vals), mean(&r_vals), standard_error(&r_vals))
    } else {
        (f64::NAN, f64::NAN, f64::NAN)
    };
    Ok(DeformedRun {
        n: model.n,
        replicas,
        w_c: k.w_c,
        r_of_n: k.r_of_n,
        ks_convolution: ecdf.ks(|t| tw_gauss_convolution_cdf(tw, sd, t)),
        ks_tw: ecdf.ks(|t| tw.eval(t)),
        ks_gaussian: ecdf.ks(|t| if sd > 0.0 { gaussian_cdf(sd, t) } else if t >= 0.0 { 1.0 } else { 0.0 }),
        statistics,
        var_s_n,
        exact_var_s_n: s_n_variance(model, &k),
        mean_r_n,
        se_r_n,
        max_identity_error: cents.iter().map(|c| c.identity_error).fold(0.0, f64::max),
        cutoff_violations: replicas - cents.len(),
    })
}

/// The deformed-edge experiment at n and at n/2.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedReport {
    pub full: DeformedRun,
    pub half: DeformedRun,
}

impl DeformedReport {
    pub fn trend_ok(&self) -> bool {
        self.full.ks_convolution < self.half.ks_convolution
    }

    /// Violations stay within the 1% budget at both sizes.
    pub fn within_budget(&self) -> bool {
        self.full.violation_fraction() <= 0.01 && self.half.violation_fraction() <= 0.01
    }
}

pub fn deformed_edge_experiment<E: ReplicaExecutor>(
    model: &DeformedModel,
    replicas: usize,
    seed: u64,
    exec: &E,
    tw: &CdfTable,
) -> Result<DeformedReport> {
    if replicas < 1000 {
        return Err(Error::Config(format!("experiment needs >= 1000 replicas, got {replicas}")));
    }
    let full = deformed_run(model, replicas, seed, exec, tw)?;
    let half = deformed_run(&model.resized(model.n / 2)?, replicas, seed, exec, tw)?;
    Ok(DeformedReport { full, half })
}

/// Maxima of N i.i.d. N(0, 1/2) variables rescaled by the classical constants.
#[derive(Debug, Clone, PartialEq)]
pub struct GumbelReport {
    pub n: u64,
    pub replicas: usize,
    pub scaling: GumbelScaling,
    pub statistics: Vec<f64>,
    pub ks: f64,
    pub mean: f64,
}

pub fn gumbel_max_experiment<E: ReplicaExecutor>(n: u64, replicas: usize, seed: u64, exec: &E) -> Result<GumbelReport> {
    if n < 10 {
        return Err(domain("Gumbel experiment N (must be >= 10)", n as f64));
    }
    let scaling = gumbel_scaling(n, GumbelVariant::Classical, None)?;
    let normal = Normal::new(0.0, FRAC_1_SQRT_2).unwrap();
    let statistics = exec.run(replicas, |i| {
        let mut rng = replica_rng(seed, i as u64);
        let m = (0..n).map(|_| normal.sample(&mut rng)).fold(f64::NEG_INFINITY, f64::max);
        (m - scaling.a) / scaling.b
    });
    let e = EmpiricalCdf::new(statistics.clone())?;
    Ok(GumbelReport { n, replicas, scaling, ks: e.ks(gumbel_cdf), mean: e.mean(), statistics })
}
