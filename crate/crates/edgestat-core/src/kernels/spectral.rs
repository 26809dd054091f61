use super::Kernel;
use crate::error::{domain, Error, Result};
use crate::specfun::{beta_q, sigmoid, HermiteBasis};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Kernel in diagonal form sum_n p_n psi_n(x) psi_n(y) over a Hermite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralKernel {
    weights: Vec<f64>,
    basis: HermiteBasis,
    /// ln of a constant L with p_n <= L q^{n+1/2}, if known.
    log_mehler_bound: Option<(f64, f64)>,
    label: String,
}

impl SpectralKernel {
    /// Kernel with the given occupation probabilities; index n uses psi_n of `basis`.
    pub fn new(weights: Vec<f64>, basis: HermiteBasis) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|p| !(**p >= 0.0 && **p <= 1.0)) {
            return Err(domain("spectral weight", *bad));
        }
        if !weights.is_empty() && weights.len() - 1 > basis.max_index() {
            return Err(Error::Index { index: weights.len() - 1, max: basis.max_index() });
        }
        Ok(SpectralKernel {
            weights,
            basis,
            log_mehler_bound: None,
            label: String::from("spectral"),
        })
    }

    /// Projection kernel of GUE(n): unit weights on psi_0, ..., psi_{n-1} at beta = 1.
    pub fn gue(n: usize) -> Result<Self> {
        if !(1..=1000).contains(&n) {
            return Err(domain("GUE kernel size", n as f64));
        }
        let mut k = SpectralKernel::new(vec![1.0; n], HermiteBasis::new(1.0, n - 1)?)?;
        k.label = format!("gue(n={n})");
        Ok(k)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn basis(&self) -> &HermiteBasis {
        &self.basis
    }

    /// Number of retained basis functions.
    pub fn truncation_index(&self) -> usize {
        self.weights.len()
    }

    /// Expected number of points, sum of the weights.
    pub fn trace(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// psi_0(x), ..., psi_{T-1}(x).
    pub fn basis_values(&self, x: f64, out: &mut [f64]) {
        self.basis
            .psi_all(x, &mut out[..self.weights.len()])
            .expect("basis covers the truncation index");
    }
}

impl Kernel for SpectralKernel {
    fn eval(&self, x: f64, y: f64) -> f64 {
        let t = self.weights.len();
        let mut px = vec![0.0; t];
        let mut py = vec![0.0; t];
        self.basis_values(x, &mut px);
        self.basis_values(y, &mut py);
        (0..t).map(|n| self.weights[n] * px[n] * py[n]).sum()
    }

    fn decay_rate(&self) -> f64 {
        f64::INFINITY
    }

    fn diag_envelope(&self, x: f64) -> f64 {
        let beta = self.basis.beta();
        // |h_n(t) e^{-t^2/2}| <= pi^{-1/4}
        let crude = self.weights.len() as f64 * beta / PI.sqrt();
        match self.log_mehler_bound {
            Some((log_l, q)) => {
                // p_n <= L q^{n+1/2} and Mehler on the diagonal
                let log_m = log_l + 0.5 * q.ln() - (1.0 - q).ln() - 0.5 * PI.ln() - x * x;
                crude.min(log_m.exp())
            }
            None => crude,
        }
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn gram(&self, xs: &[f64]) -> DMatrix<f64> {
        let t = self.weights.len();
        let n = xs.len();
        let mut psi = DMatrix::<f64>::zeros(n, t);
        let mut buf = vec![0.0; t];
        for (i, &x) in xs.iter().enumerate() {
            self.basis_values(x, &mut buf);
            for k in 0..t {
                psi[(i, k)] = buf[k] * self.weights[k].sqrt();
            }
        }
        &psi * psi.transpose()
    }
}

/// MNS kernel with weights p_n = lambda q^{n+1/2} / (1 + lambda q^{n+1/2}).
pub fn mns_kernel(q: f64, lambda: f64, truncation_tol: f64) -> Result<SpectralKernel> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain("mns_kernel lambda", lambda));
    }
    mns_kernel_log(q, lambda.ln(), truncation_tol)
}

/// As [`mns_kernel`] with lambda given through its logarithm, so that
/// lambda = e^{mu N} - 1 can be used for large mu N.
pub fn mns_kernel_log(q: f64, ln_lambda: f64, truncation_tol: f64) -> Result<SpectralKernel> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain("mns_kernel q", q));
    }
    if !(truncation_tol > 0.0 && truncation_tol < 1.0) {
        return Err(domain("mns_kernel truncation_tol", truncation_tol));
    }
    let lq = q.ln();
    let lt = truncation_tol.ln();
    let tail = -(1.0 - q).ln();
    let mut weights = Vec::new();
    loop {
        let n = weights.len() as f64;
        let la = ln_lambda + (n + 0.5) * lq;
        if la < lt && la + tail < lt {
            break;
        }
        if weights.len() >= 5_000_000 {
            return Err(Error::Resource(format!("MNS truncation beyond {} terms", weights.len())));
        }
        weights.push(sigmoid(la));
    }
    let max_index = weights.len().max(1) - 1;
    let mut k = SpectralKernel::new(weights, HermiteBasis::new(beta_q(q), max_index)?)?;
    k.log_mehler_bound = Some((ln_lambda, q));
    k.label = format!("mns(q={q}, ln_lambda={ln_lambda})");
    Ok(k)
}

/// K_GUE(N)(x, y) = sum_{n<N} h_n(x) h_n(y) e^{-(x^2+y^2)/2}.
pub fn gue_kernel(n: usize, x: f64, y: f64) -> Result<f64> {
    Ok(SpectralKernel::gue(n)?.eval(x, y))
}
