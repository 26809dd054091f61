//! Special functions: Airy, Hermite functions, Mehler kernel, extreme-value constants.

mod airy;
mod gumbel;
mod hermite;
mod mehler;

pub use airy::{airy_ai, airy_ai_prime, airy_pair, AIRY_MAX_ABS};
pub(crate) use airy::ai_unchecked;
pub use gumbel::{
    gumbel_cdf, gumbel_scaling, log_sigmoid, logistic_cdf, sigmoid, GumbelScaling, GumbelVariant,
};
pub use hermite::HermiteBasis;
pub use mehler::{beta_q, mehler_closed_form, mehler_partial_sum};

/// Hermite function psi_n(x) of `basis`.
pub fn hermite_psi(basis: &HermiteBasis, n: usize, x: f64) -> crate::Result<f64> {
    basis.psi(n, x)
}
