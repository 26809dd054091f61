//! Double contour integral for the kernel of N non-intersecting Brownian
//! motions started at y_1..y_N and observed at time S, equivalently the
//! eigenvalues of diag(y) + sqrt(2S) V.
//!
//! The vertical line Re w = c may sit anywhere off the poles: if the z contour
//! is a union of closed curves lying entirely on either side of the line, the
//! residue picked up at w = z when the line crosses a curve integrates an
//! entire function over a closed curve and vanishes. The setup is chosen by a
//! scan that minimizes the absolute (L1) size of the discretized integral.

use super::Kernel;
use crate::error::{domain, Error, Result};
use crate::quad::push_gl16;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Largest N for which the contour evaluation is offered.
pub const DEFORMED_MAX_N: usize = 60;

/// Contour geometry: the line Re w = `line` and circles (center, radius) on the real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSetup {
    pub line: f64,
    pub circles: Vec<(f64, f64)>,
}

/// One evaluation with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedValue {
    pub value: f64,
    /// Imaginary part of the discretized integral, zero in exact arithmetic.
    pub imag: f64,
    /// L1 size of the discretized integral divided by |value|.
    pub condition: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformedKernel {
    s: f64,
    y: Vec<f64>,
    tol: f64,
}

struct Sum {
    value: Complex64,
    l1: f64,
}

impl DeformedKernel {
    pub fn new(s: f64, y: Vec<f64>) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(domain("deformed kernel S", s));
        }
        if y.is_empty() || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("deformed kernel needs finite starting points".into()));
        }
        if y.len() > DEFORMED_MAX_N {
            return Err(Error::Resource(format!(
                "contour evaluation limited to N <= {DEFORMED_MAX_N}, got {}",
                y.len()
            )));
        }
        let mut y = y;
        y.sort_by(|a, b| a.total_cmp(b));
        Ok(DeformedKernel { s, y, tol: 1e-12 })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Circles around clusters of the y_j on both sides of the line, or `None`
    /// if some circle would touch the line.
    fn circles(&self, line: f64, rho: f64) -> Option<Vec<(f64, f64)>> {
        let mut groups: Vec<(f64, f64)> = Vec::new();
        for &v in &self.y {
            if (v - line).abs() < 1.2 * rho {
                return None;
            }
            match groups.last_mut() {
                Some(g) if v - g.1 < 3.0 * rho && (g.1 < line) == (v < line) => g.1 = v,
                _ => groups.push((v, v)),
            }
        }
        let circles: Vec<(f64, f64)> = groups
            .iter()
            .map(|&(a, b)| (0.5 * (a + b), 0.5 * (b - a) + rho))
            .collect();
        for &(c, r) in &circles {
            if (c - line).abs() < r + 0.1 * rho {
                return None;
            }
        }
        Some(circles)
    }

    fn log_g(&self, w: Complex64, v: f64) -> Complex64 {
        let d = w - v;
        d * d / (2.0 * self.s) + self.y.iter().map(|&t| (w - t).ln()).sum::<Complex64>()
    }

    fn log_f(&self, z: Complex64, u: f64) -> Complex64 {
        let d = z - u;
        -d * d / (2.0 * self.s) - self.y.iter().map(|&t| (z - t).ln()).sum::<Complex64>()
    }

    /// Half-length of the truncated line, where |g| has dropped by e^{-45}.
    fn line_extent(&self, line: f64, v: f64) -> f64 {
        let step = 0.25 * self.s.sqrt();
        let mut best = f64::NEG_INFINITY;
        let mut t = 0.0;
        loop {
            let val = self.log_g(Complex64::new(line, t), v).re;
            best = best.max(val);
            if val < best - 45.0 && t > 0.0 {
                return t;
            }
            t += step;
        }
    }

    fn sum(&self, u: f64, v: f64, setup: &ContourSetup, per_circle: usize, line_refine: usize) -> Sum {
        let sq = self.s.sqrt();
        let mut zs: Vec<(Complex64, Complex64)> = Vec::with_capacity(per_circle * setup.circles.len());
        for &(c, r) in &setup.circles {
            for k in 0..per_circle {
                let th = 2.0 * PI * (k as f64 + 0.5) / per_circle as f64;
                let e = Complex64::from_polar(1.0, th);
                let z = c + r * e;
                // dz = i r e^{i theta} d theta
                let ldz = Complex64::new((r * 2.0 * PI / per_circle as f64).ln(), th + 0.5 * PI);
                zs.push((z, self.log_f(z, u) + ldz));
            }
        }
        let t = self.line_extent(setup.line, v);
        let panels = ((2.0 * t / (2.0 * sq)).ceil() as usize).max(2) * line_refine;
        let (mut nodes, mut weights) = (Vec::new(), Vec::new());
        for p in 0..panels {
            let a = -t + 2.0 * t * p as f64 / panels as f64;
            let b = -t + 2.0 * t * (p + 1) as f64 / panels as f64;
            push_gl16(a, b, &mut nodes, &mut weights);
        }
        let ws: Vec<(Complex64, Complex64)> = nodes
            .iter()
            .zip(&weights)
            .map(|(&sv, &wt)| {
                let w = Complex64::new(setup.line, sv);
                // dw = i ds
                (w, self.log_g(w, v) + Complex64::new(wt.ln(), 0.5 * PI))
            })
            .collect();
        let fm = zs.iter().map(|p| p.1.re).fold(f64::NEG_INFINITY, f64::max);
        let gm = ws.iter().map(|p| p.1.re).fold(f64::NEG_INFINITY, f64::max);
        let fz: Vec<Complex64> = zs.iter().map(|p| (p.1 - fm).exp()).collect();
        let gw: Vec<Complex64> = ws.iter().map(|p| (p.1 - gm).exp()).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut l1 = 0.0;
        for (k, &(z, _)) in zs.iter().enumerate() {
            let mut inner = Complex64::new(0.0, 0.0);
            let mut inner_abs = 0.0;
            for (l, &(w, _)) in ws.iter().enumerate() {
                let term = gw[l] / (w - z);
                inner += term;
                inner_abs += term.norm();
            }
            acc += fz[k] * inner;
            l1 += fz[k].norm() * inner_abs;
        }
        // 1 / ((2 pi i)^2 S) = -1 / (4 pi^2 S)
        let scale = (fm + gm).exp() / (4.0 * PI * PI * self.s);
        Sum { value: -acc * scale, l1: l1 * scale }
    }

    /// Contour setup with the smallest L1 size among the scanned candidates.
    pub fn choose_setup(&self, u: f64, v: f64) -> Result<ContourSetup> {
        let sq = self.s.sqrt();
        let (lo, hi) = (self.y[0], *self.y.last().unwrap());
        let mut lines: Vec<f64> = Vec::new();
        for k in [1.5, 3.0, 6.0] {
            lines.push(hi + k * sq);
            lines.push(lo - k * sq);
        }
        lines.push(0.5 * (u + v));
        lines.push(u);
        lines.push(v);
        let mut mids: Vec<f64> = self
            .y
            .windows(2)
            .filter(|w| w[1] - w[0] > 1e-9)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect();
        let target = 0.5 * (u + v);
        mids.sort_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()));
        lines.extend(mids.into_iter().take(8));
        let mut best: Option<(f64, ContourSetup)> = None;
        for &line in &lines {
            for kappa in [0.3, 0.6, 1.0, 1.6, 2.5, 4.0] {
                let Some(circles) = self.circles(line, kappa * sq) else { continue };
                let setup = ContourSetup { line, circles };
                let s = self.sum(u, v, &setup, 32, 1);
                if s.l1.is_finite() && best.as_ref().is_none_or(|b| s.l1 < b.0) {
                    best = Some((s.l1, setup));
                }
            }
        }
        best.map(|b| b.1)
            .ok_or_else(|| Error::Numeric("no admissible contour configuration".into()))
    }

    /// K_N(u, v; y) with diagnostics. The value depends on the gauge; only
    /// determinants of such values are meaningful.
    pub fn evaluate(&self, u: f64, v: f64) -> Result<DeformedValue> {
        let setup = self.choose_setup(u, v)?;
        self.evaluate_with(u, v, &setup)
    }

    pub fn evaluate_with(&self, u: f64, v: f64, setup: &ContourSetup) -> Result<DeformedValue> {
        let mut m = 64;
        let mut refine = 4;
        let mut prev = self.sum(u, v, setup, m, refine);
        loop {
            m *= 2;
            refine *= 2;
            let cur = self.sum(u, v, setup, m, refine);
            let diff = (cur.value - prev.value).norm();
            if diff <= self.tol * cur.l1.max(f64::MIN_POSITIVE) || diff == 0.0 {
                let value = cur.value.re;
                return Ok(DeformedValue {
                    value,
                    imag: cur.value.im,
                    condition: cur.l1 / value.abs().max(f64::MIN_POSITIVE),
                });
            }
            if m >= 8192 {
                return Err(Error::Numeric(format!(
                    "contour quadrature not converged at u={u}, v={v}: change {diff:e}"
                )));
            }
            prev = cur;
        }
    }
}

/// Not symmetric: the gauge makes K(u, v) != K(v, u), so `gram` fills every entry.
impl Kernel for DeformedKernel {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self.evaluate(x, y).map(|d| d.value).unwrap_or(f64::NAN)
    }

    fn decay_rate(&self) -> f64 {
        f64::INFINITY
    }

    /// Each of the N particles has a Gaussian-tailed marginal around some y_j.
    fn diag_envelope(&self, x: f64) -> f64 {
        let hi = *self.y.last().unwrap();
        let spread = (2.0 * self.s * self.y.len() as f64).sqrt() * 2.0 + 2.0 * self.s.sqrt();
        let d = (x - hi - spread).max(0.0);
        self.y.len() as f64 * (-d * d / (4.0 * self.s)).exp()
    }

    fn gram(&self, xs: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(xs.len(), xs.len(), |i, j| self.eval(xs[i], xs[j]))
    }

    fn label(&self) -> String {
        format!("deformed(n={}, S={})", self.y.len(), self.s)
    }
}

/// K_N(u, v; y) for N = y.len() <= 60.
pub fn deformed_kernel(n: usize, s: f64, y: &[f64], u: f64, v: f64) -> Result<f64> {
    if n != y.len() {
        return Err(Error::Config(format!("N = {n} but {} starting points given", y.len())));
    }
    Ok(DeformedKernel::new(s, y.to_vec())?.evaluate(u, v)?.value)
}
