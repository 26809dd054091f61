//! Orthonormal Hermite functions psi_n(x) = sqrt(beta) h_n(beta x) exp(-beta^2 x^2 / 2).

use crate::error::{Error, Result};
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

const RESCALE: f64 = 1e150;

/// Hermite function family at scale `beta`, usable up to index `max_index`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteBasis {
    beta: f64,
    max_index: usize,
}

impl HermiteBasis {
    pub fn new(beta: f64, max_index: usize) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(crate::error::domain("HermiteBasis beta", beta));
        }
        Ok(HermiteBasis { beta, max_index })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// psi_n(x).
    pub fn psi(&self, n: usize, x: f64) -> Result<f64> {
        if n > self.max_index {
            return Err(Error::Index { index: n, max: self.max_index });
        }
        let mut last = 0.0;
        weighted_recurrence(n, self.beta * x, |_, v| last = v);
        Ok(self.beta.sqrt() * last)
    }

    /// Writes psi_0(x), ..., psi_{out.len()-1}(x) into `out`.
    pub fn psi_all(&self, x: f64, out: &mut [f64]) -> Result<()> {
        if out.is_empty() {
            return Ok(());
        }
        if out.len() - 1 > self.max_index {
            return Err(Error::Index { index: out.len() - 1, max: self.max_index });
        }
        let sb = self.beta.sqrt();
        weighted_recurrence(out.len() - 1, self.beta * x, |k, v| out[k] = sb * v);
        Ok(())
    }
}

/// Runs phi_{k+1} = sqrt(2/(k+1)) t phi_k - sqrt(k/(k+1)) phi_{k-1} for the
/// functions phi_k(t) = h_k(t) exp(-t^2/2), reporting every phi_k for k <= n.
///
/// The Gaussian factor is carried as a separate logarithm and the running pair
/// is renormalized whenever it grows large, so nothing under- or overflows
/// before the final product.
pub(crate) fn weighted_recurrence(n: usize, t: f64, mut emit: impl FnMut(usize, f64)) {
    let mut log_scale = -0.5 * t * t;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    emit(0, cur * log_scale.exp());
    let st = core::f64::consts::SQRT_2 * t;
    for k in 0..n {
        let kf = k as f64;
        let next = (st * cur - kf.sqrt() * prev) / (kf + 1.0).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
        }
        emit(k + 1, cur * log_scale.exp());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_at_origin() {
        let b = HermiteBasis::new(1.0, 4).unwrap();
        assert!((b.psi(0, 0.0).unwrap() - 0.751_125_544_464_942_5).abs() < 1e-15);
        assert_eq!(b.psi(1, 0.0).unwrap(), 0.0);
        assert!(b.psi(5, 0.0).is_err());
    }

    #[test]
    fn large_argument_does_not_underflow_early() {
        let b = HermiteBasis::new(1.0, 1000).unwrap();
        let v = b.psi(1000, 44.0).unwrap();
        assert!(v.is_finite() && v != 0.0);
    }

    #[test]
    fn psi_all_matches_single() {
        let b = HermiteBasis::new(1.7, 30).unwrap();
        let mut out = [0.0; 31];
        b.psi_all(0.9, &mut out).unwrap();
        for (n, v) in out.iter().enumerate() {
            assert_eq!(*v, b.psi(n, 0.9).unwrap());
        }
    }
}
