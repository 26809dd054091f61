use crate::error::{domain, Result};
use crate::quad::QuadratureRule;
use crate::specfun::sigmoid;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// L_c(x, y) = int_0^inf cos(pi (x-y) u) / (lambda^{-1} e^{u^2/c} + 1) du, lambda = e^{1/c} - 1.
pub fn bulk_kernel_lc(c: f64, x: f64, y: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain("bulk_kernel_lc c", c));
    }
    let ln_lambda = (1.0 / c).exp_m1().ln();
    // the Fermi factor is below 1e-17 once u^2/c > ln(lambda) + 40
    let u_max = (c * (ln_lambda.max(0.0) + 40.0)).sqrt();
    let d = PI * (x - y);
    let edge = (c * ln_lambda.max(0.0)).sqrt();
    let width = (c / (edge + c.sqrt())).clamp(1e-3, 0.5).min(2.0 / (1.0 + d.abs()));
    let panels = ((u_max / width).ceil() as usize).max(4);
    let rule = QuadratureRule::composite(0.0, u_max, panels, 16);
    Ok(rule.integrate(|u| (d * u).cos() * sigmoid(ln_lambda - u * u / c)))
}

/// (pi c / 2) sin(pi d) / sinh(pi^2 c d / 2), d = x - y, with the value 1 at d = 0.
pub fn bulk_kernel_lc_approx(c: f64, x: f64, y: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain("bulk_kernel_lc_approx c", c));
    }
    let d = x - y;
    let s = 0.5 * PI * PI * c * d;
    if s.abs() < 1e-8 {
        let pd = PI * d;
        // series of the removable singularity to second order
        return Ok((1.0 - pd * pd / 6.0) * (1.0 - s * s / 6.0));
    }
    Ok(0.5 * PI * c * (PI * d).sin() / s.sinh())
}

/// sin(pi d) / (pi d), d = x - y.
pub fn sine_kernel(x: f64, y: f64) -> f64 {
    let d = PI * (x - y);
    if d.abs() < 1e-8 {
        1.0 - d * d / 6.0
    } else {
        d.sin() / d
    }
}
