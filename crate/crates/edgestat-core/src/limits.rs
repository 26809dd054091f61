//! Convergence tables for the kernel and distribution limit theorems.
//!
//! Each check evaluates a sup-norm error on a fixed grid for every entry of a
//! parameter ladder. A table passes when its last error is strictly below its
//! first; intermediate wiggles are allowed.

use crate::error::{domain, Error, Result};
use crate::exec::ReplicaExecutor;
use crate::fredholm::{fredholm_det_grid, tracy_widom_cdf, NystromConfig};
use crate::kernels::{
    bulk_kernel_lc, bulk_kernel_lc_approx, mns_kernel_log, AiryKernel, GumbelScaledKernel, InterpolatingKernel, Kernel,
    SpectralKernel,
};
use crate::specfun::{gumbel_cdf, gumbel_scaling, GumbelVariant};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Truncation tolerance for the MNS Hermite sums.
pub const MNS_TRUNCATION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    /// What the scaled quantity is compared against.
    pub target: String,
    /// Name of the ladder parameter.
    pub parameter: String,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Human-readable description of the evaluation grid.
    pub grid: String,
}

impl ConvergenceTable {
    fn new(target: &str, parameter: &str, values: &[f64], errors: Vec<f64>, grid: String) -> Result<Self> {
        if let Some(e) = errors.iter().find(|e| !e.is_finite()) {
            return Err(Error::Numeric(format!("non-finite error {e} in {target} table")));
        }
        Ok(ConvergenceTable {
            target: target.into(),
            parameter: parameter.into(),
            values: values.to_vec(),
            errors,
            grid,
        })
    }

    /// Strict decrease from the first entry to the last.
    pub fn passed(&self) -> bool {
        match (self.errors.first(), self.errors.last()) {
            (Some(a), Some(b)) => self.errors.len() >= 2 && b < a,
            _ => false,
        }
    }

    pub fn last_error(&self) -> f64 {
        self.errors.last().copied().unwrap_or(f64::NAN)
    }

    /// Plain-text rendering, one row per ladder entry.
    pub fn render(&self) -> String {
        let mut s = format!("# {} on {}\n{}\tsup_error\n", self.target, self.grid, self.parameter);
        for (v, e) in self.values.iter().zip(&self.errors) {
            s.push_str(&format!("{v}\t{e:.6e}\n"));
        }
        s
    }

    /// Err with the rendered table when the trend fails.
    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(Error::Trend(self.render()))
        }
    }
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn sup_diff<E: ReplicaExecutor>(
    exec: &E,
    values: &[f64],
    row: impl Fn(f64) -> Result<f64> + Sync + Send,
) -> Result<Vec<f64>> {
    exec.run(values.len(), |i| row(values[i])).into_iter().collect()
}

fn max_abs(a: impl IntoIterator<Item = f64>) -> f64 {
    a.into_iter().fold(0.0, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

/// sup over a point grid of |scaled - target|, with both sides given as Gram matrices.
fn gram_sup(scaled: &nalgebra::DMatrix<f64>, target: &nalgebra::DMatrix<f64>) -> f64 {
    max_abs((scaled - target).iter().copied())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Small-alpha (or small-mu) limit.
    ToPoisson,
    /// Large-alpha (or large-mu) limit.
    ToAiry,
}

fn check_ladder(values: &[f64], increasing: bool, lo: f64, hi: f64, what: &'static str) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::Config(format!("{what} ladder needs at least two entries")));
    }
    for &v in values {
        if !(v >= lo && v <= hi) {
            return Err(domain(what, v));
        }
    }
    let ordered = values.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] });
    if !ordered {
        return Err(Error::Config(format!(
            "{what} ladder must be strictly {}",
            if increasing { "increasing" } else { "decreasing" }
        )));
    }
    Ok(())
}

/// Gumbel-scaled M_alpha against K_ext on a diagonal-plus-neighbour grid
/// ([-1, 3] step 0.5), or M_alpha against the Airy kernel on [-3, 1]^2.
pub fn check_thm_1_2<E: ReplicaExecutor>(direction: Direction, alphas: &[f64], exec: &E) -> Result<ConvergenceTable> {
    match direction {
        Direction::ToPoisson => {
            check_ladder(alphas, false, 1e-3, 0.5, "Poisson-limit alpha")?;
            let us = grid(-1.0, 3.0, 9);
            let target = nalgebra::DMatrix::from_fn(us.len(), us.len(), |i, j| if i == j { (-us[i]).exp() } else { 0.0 });
            let errors = sup_diff(exec, alphas, |a| Ok(gram_sup(&GumbelScaledKernel::new(a)?.gram(&us), &target)))?;
            ConvergenceTable::new("K_ext", "alpha", alphas, errors, "[-1,3]^2 step 0.5".into())
        }
        Direction::ToAiry => {
            check_ladder(alphas, true, 2.0, 100.0, "Airy-limit alpha")?;
            let xs = grid(-3.0, 1.0, 9);
            let target = AiryKernel.gram(&xs);
            let errors = sup_diff(exec, alphas, |a| Ok(gram_sup(&InterpolatingKernel::new(a)?.gram(&xs), &target)))?;
            ConvergenceTable::new("K_Airy", "alpha", alphas, errors, "[-3,1]^2 step 0.5".into())
        }
    }
}

/// F_alpha against F_TW on xi in [-5, 3], or the Gumbel-rescaled F_alpha
/// against F_G on the same window.
pub fn check_thm_1_3<E: ReplicaExecutor>(
    direction: Direction,
    alphas: &[f64],
    cfg: &NystromConfig,
    exec: &E,
) -> Result<ConvergenceTable> {
    let xis = grid(-5.0, 3.0, 33);
    match direction {
        Direction::ToAiry => {
            check_ladder(alphas, true, 2.0, 100.0, "Tracy-Widom-limit alpha")?;
            let tw: Vec<f64> = xis.iter().map(|&t| tracy_widom_cdf(t, cfg)).collect::<Result<_>>()?;
            let errors = sup_diff(exec, alphas, |a| {
                let f = fredholm_det_grid(&InterpolatingKernel::new(a)?, &xis, cfg)?;
                Ok(max_abs(f.iter().zip(&tw).map(|(x, y)| x - y)))
            })?;
            ConvergenceTable::new("F_TW", "alpha", alphas, errors, "xi in [-5,3] step 0.25".into())
        }
        Direction::ToPoisson => {
            check_ladder(alphas, false, 1e-3, 0.5, "Gumbel-limit alpha")?;
            let errors = sup_diff(exec, alphas, |a| {
                let f = fredholm_det_grid(&GumbelScaledKernel::new(a)?, &xis, cfg)?;
                Ok(max_abs(f.iter().zip(&xis).map(|(x, &u)| x - gumbel_cdf(u))))
            })?;
            ConvergenceTable::new("F_G", "alpha", alphas, errors, "xi in [-5,3] step 0.25".into())
        }
    }
}

/// K_lambda for N, mu with lambda = e^{mu N} - 1.
pub fn mns_for(n: f64, mu: f64) -> Result<SpectralKernel> {
    let ln_lambda = mu * n + (-(-mu * n).exp_m1()).ln();
    mns_kernel_log((-mu).exp(), ln_lambda, MNS_TRUNCATION_TOL)
}

/// Which end of the mu range Prop 1.7 is checked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuDirection {
    ToGue,
    ToPoissonDensity,
}

/// Large mu: sup of |K_lambda - K_GUE(N)| on [-3, 3]^2. Small mu: the
/// off-diagonal value |K_lambda(0, 1)|, with the diagonal ratio
/// K_lambda(0, 0) / (N pi^{-1/2}) available from [`prop_1_7_diag_ratio`].
pub fn check_prop_1_7<E: ReplicaExecutor>(
    direction: MuDirection,
    n: usize,
    mus: &[f64],
    exec: &E,
) -> Result<ConvergenceTable> {
    if n == 0 || n > 1000 {
        return Err(Error::Config(format!("Prop 1.7 N={n} outside 1..=1000")));
    }
    let nf = n as f64;
    match direction {
        MuDirection::ToGue => {
            check_ladder(mus, true, 0.5, 200.0, "GUE-limit mu")?;
            let xs = grid(-3.0, 3.0, 13);
            let target = SpectralKernel::gue(n)?.gram(&xs);
            let errors = sup_diff(exec, mus, |mu| Ok(gram_sup(&mns_for(nf, mu)?.gram(&xs), &target)))?;
            ConvergenceTable::new("K_GUE(N)", "mu", mus, errors, "[-3,3]^2 step 0.5".into())
        }
        MuDirection::ToPoissonDensity => {
            check_ladder(mus, false, 1e-3, 1.0, "Poisson-density mu")?;
            let errors = sup_diff(exec, mus, |mu| Ok(mns_for(nf, mu)?.eval(0.0, 1.0).abs()))?;
            ConvergenceTable::new("0 off the diagonal", "mu", mus, errors, "(x,y)=(0,1)".into())
        }
    }
}

/// K_lambda(0, 0) / (N pi^{-1/2}), which tends to 1 as mu -> 0.
pub fn prop_1_7_diag_ratio(n: usize, mu: f64) -> Result<f64> {
    let nf = n as f64;
    Ok(mns_for(nf, mu)?.eval(0.0, 0.0) / (nf / PI.sqrt()))
}

fn check_sizes(ns: &[usize], lo: usize, hi: usize, what: &'static str) -> Result<Vec<f64>> {
    let v: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    check_ladder(&v, true, lo as f64, hi as f64, what)?;
    Ok(v)
}

/// sup over [-2, 2]^2 of |(pi/(2N sqrt c)) K_lambda(pi x/(2N sqrt c), pi y/(2N sqrt c)) - L_c(x, y)|.
pub fn check_thm_1_8<E: ReplicaExecutor>(c: f64, ns: &[usize], exec: &E) -> Result<ConvergenceTable> {
    if !(0.05..=5.0).contains(&c) {
        return Err(domain("bulk limit c (must lie in [0.05, 5])", c));
    }
    let values = check_sizes(ns, 2, 400, "bulk limit N")?;
    let xs = grid(-2.0, 2.0, 17);
    let mut target = nalgebra::DMatrix::zeros(xs.len(), xs.len());
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            target[(i, j)] = bulk_kernel_lc(c, xs[i], xs[j])?;
        }
    }
    let errors = sup_diff(exec, &values, |n| {
        let k = mns_for(n, 1.0 / (c * n))?;
        let s = PI / (2.0 * n * c.sqrt());
        let pts: Vec<f64> = xs.iter().map(|&x| s * x).collect();
        Ok(gram_sup(&(k.gram(&pts) * s), &target))
    })?;
    ConvergenceTable::new("L_c", "N", &values, errors, "[-2,2]^2 step 0.25".into())
}

/// sup over [-2, 2]^2 of |approximate L_c - L_c|.
pub fn bulk_approx_error(c: f64) -> Result<f64> {
    let xs = grid(-2.0, 2.0, 41);
    let mut m: f64 = 0.0;
    for &x in &xs {
        m = m.max((bulk_kernel_lc(c, x, 0.0)? - bulk_kernel_lc_approx(c, x, 0.0)?).abs());
    }
    Ok(m)
}

/// b_N K_lambda(a_N(c) + b_N xi, a_N(c) + b_N eta) against K_ext on the
/// diagonal xi in {0, 1, 2} and at (0, 1). `centering_c` replaces c in a_N
/// only, for the wrong-centering control.
pub fn check_thm_1_9<E: ReplicaExecutor>(
    c: f64,
    centering_c: f64,
    ns: &[usize],
    exec: &E,
) -> Result<ConvergenceTable> {
    if !(0.05..=5.0).contains(&c) {
        return Err(domain("edge limit c (must lie in [0.05, 5])", c));
    }
    let values = check_sizes(ns, 10, 2000, "edge limit N")?;
    let errors = sup_diff(exec, &values, |n| {
        let sc = gumbel_scaling(n as u64, GumbelVariant::MnsEdge, Some(centering_c))?;
        let k = mns_for(n, 1.0 / (c * n))?;
        let at = |xi: f64| sc.a + sc.b * xi;
        let mut m: f64 = 0.0;
        for xi in [0.0, 1.0, 2.0] {
            m = m.max((sc.b * k.eval(at(xi), at(xi)) - (-xi).exp()).abs());
        }
        Ok(m.max((sc.b * k.eval(at(0.0), at(1.0))).abs()))
    })?;
    let target = if centering_c == c { "K_ext" } else { "K_ext (wrong centering)" };
    ConvergenceTable::new(target, "N", &values, errors, "diagonal xi in {0,1,2} and (0,1)".into())
}

/// sup over [-3, 2]^2 of |(sqrt(alpha)/(2N^{1/3})) K_lambda(N^{1/3} sqrt(alpha) + ...) - M_alpha|
/// with mu = alpha / N^{1/3}.
pub fn check_thm_1_10<E: ReplicaExecutor>(alpha: f64, ns: &[usize], exec: &E) -> Result<ConvergenceTable> {
    if !(0.5..=4.0).contains(&alpha) {
        return Err(domain("edge transition alpha (must lie in [0.5, 4])", alpha));
    }
    let values = check_sizes(ns, 8, 1000, "edge transition N")?;
    let xis = grid(-3.0, 2.0, 11);
    let target = InterpolatingKernel::new(alpha)?.gram(&xis);
    let errors = sup_diff(exec, &values, |n| {
        let n3 = n.cbrt();
        let k = mns_for(n, alpha / n3)?;
        let s = alpha.sqrt() / (2.0 * n3);
        let pts: Vec<f64> = xis.iter().map(|&x| n3 * alpha.sqrt() + s * x).collect();
        Ok(gram_sup(&(k.gram(&pts) * s), &target))
    })?;
    ConvergenceTable::new("M_alpha", "N", &values, errors, "[-3,2]^2 step 0.5".into())
}

/// Scale of M_alpha on the edge-transition grid, max of the diagonal.
pub fn m_alpha_diag_scale(alpha: f64) -> Result<f64> {
    let k = InterpolatingKernel::new(alpha)?;
    Ok(max_abs(grid(-3.0, 2.0, 11).into_iter().map(|x| k.eval(x, x))))
}
