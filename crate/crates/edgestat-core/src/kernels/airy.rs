use super::Kernel;
use crate::error::{domain, Result};
use crate::quad::{panel_breaks, push_gl16, QuadratureRule};
use crate::specfun::{ai_unchecked, sigmoid};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

const AIRY_KERNEL_MIN_ARG: f64 = -40.0;

/// Weight w(lambda) in integrals of w(lambda) Ai(x + lambda) Ai(y + lambda).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Weight {
    /// Indicator of lambda > 0 (the Airy kernel).
    Step,
    /// e^{a lambda} / (e^{a lambda} + 1).
    Fermi(f64),
    /// e^{a lambda}.
    Exp(f64),
}

impl Weight {
    fn at(&self, l: f64) -> f64 {
        match *self {
            Weight::Step => 1.0,
            Weight::Fermi(a) => sigmoid(a * l),
            Weight::Exp(a) => (a * l).exp(),
        }
    }

    /// Lower truncation point; the discarded tail is below ~1e-14.
    fn lower(&self) -> f64 {
        match *self {
            Weight::Step => 0.0,
            Weight::Fermi(a) => (3e-15 * a).ln() / a,
            Weight::Exp(a) => ((1e-16 * a).ln() - 5.0) / a,
        }
    }

    /// Upper truncation in terms of the smallest Airy argument.
    fn upper_arg(&self) -> f64 {
        match *self {
            Weight::Step | Weight::Fermi(_) => 9.5,
            Weight::Exp(a) => {
                // 4/3 z^{3/2} - a z >= 48
                let mut z: f64 = 9.5;
                while 4.0 / 3.0 * z.powf(1.5) - a * z < 48.0 {
                    z += 0.5;
                }
                z
            }
        }
    }

    fn max_width(&self, l: f64) -> f64 {
        match *self {
            Weight::Step | Weight::Exp(_) => f64::INFINITY,
            // poles of the Fermi factor sit at i pi (2k+1) / a
            Weight::Fermi(a) => (2.0 / a).max(0.6 * l.abs()),
        }
    }
}

/// Quadrature in lambda adapted to the Airy oscillation at the smallest argument.
pub(crate) fn lambda_rule(weight: Weight, x_min: f64) -> QuadratureRule {
    let lo = weight.lower();
    let hi = (weight.upper_arg() - x_min).max(lo + 1.0);
    let breaks = lambda_breaks(weight, x_min, lo, hi);
    let mut nodes = Vec::with_capacity(16 * breaks.len());
    let mut weights = Vec::with_capacity(16 * breaks.len());
    for w in breaks.windows(2) {
        push_gl16(w[0], w[1], &mut nodes, &mut weights);
    }
    for (x, w) in nodes.iter().zip(weights.iter_mut()) {
        *w *= weight.at(*x);
    }
    QuadratureRule { nodes, weights, interval: (lo, hi) }
}

fn lambda_breaks(weight: Weight, x_min: f64, lo: f64, hi: f64) -> Vec<f64> {
    panel_breaks(lo, hi, |l| {
        let z = x_min + l;
        let osc = if z < -1.0 { 6.0 / (-z).sqrt() } else { 1.0 };
        osc.min(1.0).min(weight.max_width(l))
    })
}

fn lambda_eval(weight: Weight, x: f64, y: f64) -> f64 {
    let r = lambda_rule(weight, x.min(y));
    r.nodes
        .iter()
        .zip(&r.weights)
        .map(|(&l, &w)| w * ai_unchecked(x + l) * ai_unchecked(y + l))
        .sum()
}

fn lambda_gram(weight: Weight, xs: &[f64]) -> DMatrix<f64> {
    let n = xs.len();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let r = lambda_rule(weight, x_min);
    let m = r.len();
    let mut a = DMatrix::<f64>::zeros(n, m);
    for k in 0..m {
        let (l, w) = (r.nodes[k], r.weights[k]);
        let sw = w.max(0.0).sqrt();
        for i in 0..n {
            a[(i, k)] = sw * ai_unchecked(xs[i] + l);
        }
    }
    let mut k = &a * a.transpose();
    // exact symmetry
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (k[(i, j)] + k[(j, i)]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

/// Upper bound for K_Airy(x, x), checked on a grid against the closed form.
pub fn airy_diag_envelope(x: f64) -> f64 {
    if x >= 0.0 {
        0.07 * (1.0 + x.sqrt()) * (-4.0 / 3.0 * x.powf(1.5)).exp()
    } else {
        0.07 + 1.05 * (-x).sqrt() / PI
    }
}

/// Airy kernel K(x, y) = int_0^inf Ai(x + l) Ai(y + l) dl.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AiryKernel;

impl Kernel for AiryKernel {
    fn eval(&self, x: f64, y: f64) -> f64 {
        lambda_eval(Weight::Step, x, y)
    }
    fn domain_left(&self) -> f64 {
        AIRY_KERNEL_MIN_ARG
    }
    fn decay_rate(&self) -> f64 {
        f64::INFINITY
    }
    fn diag_envelope(&self, x: f64) -> f64 {
        airy_diag_envelope(x)
    }
    fn label(&self) -> String {
        String::from("airy")
    }
    fn gram(&self, xs: &[f64]) -> DMatrix<f64> {
        lambda_gram(Weight::Step, xs)
    }
}

/// Airy kernel by panel quadrature, defined for x, y >= -40.
pub fn airy_kernel(x: f64, y: f64) -> Result<f64> {
    for v in [x, y] {
        if !(v >= AIRY_KERNEL_MIN_ARG) {
            return Err(domain("airy_kernel", v));
        }
    }
    Ok(AiryKernel.eval(x, y))
}

/// Right side of the exponential Airy identity,
/// (4 pi a)^{-1/2} exp(-(x-y)^2/(4a) - a(x+y)/2 + a^3/12).
pub fn exp_airy_identity_rhs(alpha: f64, x: f64, y: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain("exp_airy_identity alpha", alpha));
    }
    let d = x - y;
    Ok((-d * d / (4.0 * alpha) - alpha * (x + y) / 2.0 + alpha.powi(3) / 12.0).exp()
        / (4.0 * PI * alpha).sqrt())
}

/// Quadrature of int e^{a l} Ai(x + l) Ai(y + l) dl over the real line.
pub fn exp_airy_identity_lhs(alpha: f64, x: f64, y: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain("exp_airy_identity alpha", alpha));
    }
    Ok(lambda_eval(Weight::Exp(alpha), x, y))
}

/// The interpolating kernel M_alpha.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolatingKernel {
    alpha: f64,
}

impl InterpolatingKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain("interpolating kernel alpha", alpha));
        }
        Ok(InterpolatingKernel { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Kernel for InterpolatingKernel {
    fn eval(&self, x: f64, y: f64) -> f64 {
        lambda_eval(Weight::Fermi(self.alpha), x, y)
    }
    fn decay_rate(&self) -> f64 {
        self.alpha
    }
    fn diag_envelope(&self, x: f64) -> f64 {
        let a = self.alpha;
        let mut b = (-a * x + a.powi(3) / 12.0).exp() / (4.0 * PI * a).sqrt();
        if a >= 1.0 {
            b = b.min((-x).exp());
        }
        if x > 0.0 {
            let split = airy_diag_envelope(x) + airy_diag_envelope(0.5 * x) + 0.32 * (-0.5 * a * x).exp() / a;
            b = b.min(split);
        }
        b
    }
    fn label(&self) -> String {
        format!("m_alpha(alpha={})", self.alpha)
    }
    fn gram(&self, xs: &[f64]) -> DMatrix<f64> {
        lambda_gram(Weight::Fermi(self.alpha), xs)
    }
}

/// M_alpha(x, y), for alpha > 0 and x, y >= -40.
pub fn m_alpha(alpha: f64, x: f64, y: f64) -> Result<f64> {
    let k = InterpolatingKernel::new(alpha)?;
    for v in [x, y] {
        if !(v >= AIRY_KERNEL_MIN_ARG) {
            return Err(domain("m_alpha", v));
        }
    }
    Ok(k.eval(x, y))
}

/// f(alpha) = log(4 pi alpha^3) / (2 alpha).
pub fn gumbel_shift(alpha: f64) -> f64 {
    (4.0 * PI * alpha.powi(3)).ln() / (2.0 * alpha)
}

/// alpha^{-1} M_alpha(u/alpha - f(alpha), v/alpha - f(alpha)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GumbelScaledKernel {
    inner: InterpolatingKernel,
    shift: f64,
}

impl GumbelScaledKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain("Gumbel-scaled kernel alpha", alpha));
        }
        Ok(GumbelScaledKernel { inner: InterpolatingKernel::new(alpha)?, shift: gumbel_shift(alpha) })
    }

    fn to_x(self, u: f64) -> f64 {
        u / self.inner.alpha - self.shift
    }
}

impl Kernel for GumbelScaledKernel {
    fn eval(&self, u: f64, v: f64) -> f64 {
        self.inner.eval(self.to_x(u), self.to_x(v)) / self.inner.alpha
    }
    fn decay_rate(&self) -> f64 {
        1.0
    }
    fn diag_envelope(&self, u: f64) -> f64 {
        (-u + self.inner.alpha.powi(3) / 12.0).exp()
    }
    fn label(&self) -> String {
        format!("m_alpha_gumbel(alpha={})", self.inner.alpha)
    }
    fn gram(&self, us: &[f64]) -> DMatrix<f64> {
        let xs: Vec<f64> = us.iter().map(|&u| self.to_x(u)).collect();
        self.inner.gram(&xs) / self.inner.alpha
    }
}

/// Gumbel-scaled interpolating kernel, alpha in (0, 1].
pub fn m_alpha_gumbel_scaled(alpha: f64, u: f64, v: f64) -> Result<f64> {
    Ok(GumbelScaledKernel::new(alpha)?.eval(u, v))
}
