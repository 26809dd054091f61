//! Gauss-Legendre rules and composite panel rules on finite intervals.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Nodes and weights of a quadrature rule together with the interval it covers.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

/// Half of the symmetric 16-point Gauss-Legendre rule on [-1, 1].
pub(crate) const GL16_X: [f64; 8] = [
    0.989_400_934_991_649_9,
    0.944_575_023_073_232_6,
    0.865_631_202_387_831_7,
    0.755_404_408_355_003,
    0.617_876_244_402_643_7,
    0.458_016_777_657_227_4,
    0.281_603_550_779_258_9,
    0.095_012_509_837_637_44,
];
pub(crate) const GL16_W: [f64; 8] = [
    0.027_152_459_411_754_095,
    0.062_253_523_938_647_89,
    0.095_158_511_682_492_78,
    0.124_628_971_255_533_87,
    0.149_595_988_816_576_73,
    0.169_156_519_395_002_54,
    0.182_603_415_044_923_6,
    0.189_450_610_455_068_5,
];

/// Legendre polynomial P_n and its derivative at x.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl QuadratureRule {
    /// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        QuadratureRule { nodes, weights, interval: (-1.0, 1.0) }
    }

    /// Affine image of this rule on [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> Self {
        let (lo, hi) = self.interval;
        let s = (b - a) / (hi - lo);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| a + (x - lo) * s).collect(),
            weights: self.weights.iter().map(|&w| w * s).collect(),
            interval: (a, b),
        }
    }

    /// `panels` equal panels of an n-point Gauss-Legendre rule on [a, b].
    pub fn composite(a: f64, b: f64, panels: usize, n: usize) -> Self {
        let base = Self::gauss_legendre(n);
        let breaks: Vec<f64> = (0..=panels)
            .map(|k| a + (b - a) * k as f64 / panels as f64)
            .collect();
        Self::on_breaks(&breaks, &base)
    }

    /// Copies of `base` on consecutive panels [breaks[k], breaks[k+1]].
    pub fn on_breaks(breaks: &[f64], base: &QuadratureRule) -> Self {
        let mut nodes = Vec::with_capacity(base.len() * breaks.len());
        let mut weights = Vec::with_capacity(base.len() * breaks.len());
        for w in breaks.windows(2) {
            let p = base.mapped(w[0], w[1]);
            nodes.extend_from_slice(&p.nodes);
            weights.extend_from_slice(&p.weights);
        }
        QuadratureRule {
            nodes,
            weights,
            interval: (breaks[0], *breaks.last().unwrap()),
        }
    }

    /// 16-point panels on [a, b] whose widths never exceed `width(position)`.
    pub fn adaptive_panels(a: f64, b: f64, width: impl Fn(f64) -> f64) -> Self {
        let breaks = panel_breaks(a, b, width);
        let mut nodes = Vec::with_capacity(16 * breaks.len());
        let mut weights = Vec::with_capacity(16 * breaks.len());
        for w in breaks.windows(2) {
            push_gl16(w[0], w[1], &mut nodes, &mut weights);
        }
        QuadratureRule { nodes, weights, interval: (a, b) }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Panel boundaries from a to b with local width bounded by `width`.
pub(crate) fn panel_breaks(a: f64, b: f64, width: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut breaks = alloc::vec![a];
    let mut x = a;
    while x < b {
        let h = width(x).max(1e-3);
        x = if x + h >= b - 1e-9 * h { b } else { x + h };
        breaks.push(x);
    }
    breaks
}

pub(crate) fn push_gl16(a: f64, b: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    for k in (0..8).rev() {
        nodes.push(c - h * GL16_X[k]);
        weights.push(h * GL16_W[k]);
    }
    for k in 0..8 {
        nodes.push(c + h * GL16_X[k]);
        weights.push(h * GL16_W[k]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let r = QuadratureRule::gauss_legendre(12);
        for d in 0..24 {
            let exact = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
            let v = r.integrate(|x| x.powi(d));
            assert!((v - exact).abs() < 1e-14, "degree {d}: {v}");
        }
    }

    #[test]
    fn gl16_table_matches_newton() {
        let r = QuadratureRule::gauss_legendre(16);
        for k in 0..8 {
            assert!((r.nodes[8 + k] - GL16_X[7 - k]).abs() < 1e-15);
            assert!((r.weights[8 + k] - GL16_W[7 - k]).abs() < 1e-15);
        }
    }

    #[test]
    fn adaptive_panels_respect_width() {
        let r = QuadratureRule::adaptive_panels(0.0, 10.0, |_| 0.7);
        assert_eq!(r.len() % 16, 0);
        assert!((r.integrate(|x| x.exp()) - (10f64.exp() - 1.0)).abs() < 1e-9);
    }
}
