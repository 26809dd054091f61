//! Mehler's formula in the scaled variables of the MNS kernel.

use crate::error::{domain, Result};
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// beta_q = sqrt((1 + q) / (1 - q)).
pub fn beta_q(q: f64) -> f64 {
    ((1.0 + q) / (1.0 - q)).sqrt()
}

/// Closed form of sum_n q^{n+1/2} psi_n(x) psi_n(y) with psi_n at scale beta_q:
/// sqrt(q) / ((1-q) sqrt(pi)) exp(-(x^2+y^2)/2 - q (x-y)^2 / (1-q)^2).
pub fn mehler_closed_form(q: f64, x: f64, y: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(domain("mehler_closed_form q", q));
    }
    let d = x - y;
    let om = 1.0 - q;
    Ok(q.sqrt() / (om * PI.sqrt()) * (-0.5 * (x * x + y * y) - q * d * d / (om * om)).exp())
}

/// Partial sum sum_{n<terms} q^{n+1/2} psi_n(x) psi_n(y) at scale beta_q.
///
/// The polynomial part is accumulated in double-double arithmetic and the
/// Gaussian factor applied once at the end, so the result is the truncated
/// series itself rather than a value dominated by cancellation error.
pub fn mehler_partial_sum(q: f64, x: f64, y: f64, terms: usize) -> Result<f64> {
    use crate::dd::Dd;
    if !(q > 0.0 && q < 1.0) {
        return Err(domain("mehler_partial_sum q", q));
    }
    let b2 = Dd::from_f64(1.0 + q).div_f64(1.0 - q);
    let beta = b2.sqrt();
    let two = Dd::from_f64(2.0);
    let tx = beta.mul(Dd::from_f64(x));
    let ty = beta.mul(Dd::from_f64(y));
    let h0 = Dd::from_f64(PI.powf(-0.25));
    let (mut px, mut cx) = (Dd::from_f64(0.0), h0);
    let (mut py, mut cy) = (Dd::from_f64(0.0), h0);
    let qd = Dd::from_f64(q);
    let mut qn = qd.sqrt();
    let mut sum = Dd::from_f64(0.0);
    for n in 0..terms {
        sum = sum.add(qn.mul(cx).mul(cy));
        qn = qn.mul(qd);
        let a = two.div_f64((n + 1) as f64).sqrt();
        let c = Dd::from_f64(n as f64).div_f64((n + 1) as f64).sqrt();
        let nx = a.mul(tx).mul(cx).sub(c.mul(px));
        let ny = a.mul(ty).mul(cy).sub(c.mul(py));
        px = cx;
        cx = nx;
        py = cy;
        cy = ny;
    }
    let (txf, tyf) = (tx.to_f64(), ty.to_f64());
    Ok(sum.to_f64() * beta.to_f64() * (-0.5 * (txf * txf + tyf * tyf)).exp())
}
