//! Gumbel law, its classical normalizing constants, and the logistic law.

use crate::error::{domain, Result};
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GumbelVariant {
    /// Maxima of N independent N(0, 1/2) variables.
    Classical,
    /// Edge of the MNS model with mu = 1/(cN), lambda = e^{1/c} - 1.
    MnsEdge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GumbelScaling {
    pub a: f64,
    pub b: f64,
    pub variant: GumbelVariant,
}

/// F_G(x) = exp(-exp(-x)).
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Centering and scale for maxima of size `n`; `c` is required for the MNS variant.
pub fn gumbel_scaling(n: u64, variant: GumbelVariant, c: Option<f64>) -> Result<GumbelScaling> {
    if n < 2 {
        return Err(domain("gumbel_scaling N", n as f64));
    }
    let l = (n as f64).ln();
    let sl = l.sqrt();
    let b = 1.0 / (2.0 * sl);
    let a = match variant {
        GumbelVariant::Classical => sl - (4.0 * PI * l).ln() / (4.0 * sl),
        GumbelVariant::MnsEdge => {
            let c = c.ok_or_else(|| {
                crate::error::Error::Config("the MNS edge scaling needs c".into())
            })?;
            if !(c > 0.0) {
                return Err(domain("gumbel_scaling c", c));
            }
            let lambda = (1.0 / c).exp_m1();
            sl - (4.0 * PI * l / (lambda * lambda * c * c)).ln() / (4.0 * sl)
        }
    };
    Ok(GumbelScaling { a, b, variant })
}

/// G_alpha(x) = e^{alpha x} / (1 + e^{alpha x}).
pub fn logistic_cdf(alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain("logistic_cdf alpha", alpha));
    }
    Ok(sigmoid(alpha * x))
}

/// 1 / (1 + e^{-z}) without overflow in either tail.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// ln(1 / (1 + e^{-z})).
pub fn log_sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        -(-z).exp().ln_1p()
    } else {
        z - z.exp().ln_1p()
    }
}
