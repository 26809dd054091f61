//! Correlation kernels of the edge processes.

mod airy;
mod bulk;
mod deformed;
mod spectral;

pub use airy::{
    airy_diag_envelope, airy_kernel, exp_airy_identity_lhs, exp_airy_identity_rhs, m_alpha,
    m_alpha_gumbel_scaled, gumbel_shift, AiryKernel, GumbelScaledKernel, InterpolatingKernel,
};
pub use bulk::{bulk_kernel_lc, bulk_kernel_lc_approx, sine_kernel};
pub use deformed::{deformed_kernel, ContourSetup, DeformedKernel, DeformedValue, DEFORMED_MAX_N};
pub use spectral::{gue_kernel, mns_kernel, mns_kernel_log, SpectralKernel};

use crate::linalg::det_lu;
use alloc::string::String;
use nalgebra::DMatrix;

/// A real correlation kernel with the metadata used for truncation. All kernels
/// here are symmetric except the gauge-dependent deformed one.
pub trait Kernel {
    fn eval(&self, x: f64, y: f64) -> f64;

    /// Left end of the natural domain.
    fn domain_left(&self) -> f64 {
        f64::NEG_INFINITY
    }

    /// Rate of an exponential bound on the diagonal as x grows.
    fn decay_rate(&self) -> f64;

    /// Upper bound for K(x, x).
    fn diag_envelope(&self, x: f64) -> f64;

    fn label(&self) -> String;

    /// Matrix K(x_i, x_j).
    fn gram(&self, xs: &[f64]) -> DMatrix<f64> {
        let n = xs.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = self.eval(xs[i], xs[j]);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }
}

impl<K: Kernel + ?Sized> Kernel for &K {
    fn eval(&self, x: f64, y: f64) -> f64 {
        (**self).eval(x, y)
    }
    fn domain_left(&self) -> f64 {
        (**self).domain_left()
    }
    fn decay_rate(&self) -> f64 {
        (**self).decay_rate()
    }
    fn diag_envelope(&self, x: f64) -> f64 {
        (**self).diag_envelope(x)
    }
    fn label(&self) -> String {
        (**self).label()
    }
    fn gram(&self, xs: &[f64]) -> DMatrix<f64> {
        (**self).gram(xs)
    }
}

/// Correlation function rho_k(x_1, ..., x_k) = det(K(x_i, x_j)).
pub fn correlation_rho<K: Kernel + ?Sized>(kernel: &K, points: &[f64]) -> f64 {
    if points.is_empty() {
        return 1.0;
    }
    det_lu(kernel.gram(points))
}
