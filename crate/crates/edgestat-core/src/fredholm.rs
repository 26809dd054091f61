//! Fredholm determinants det(I - K) on L^2(t, inf) by the Nystrom method.

use crate::error::{domain, Error, Result};
use crate::kernels::{AiryKernel, InterpolatingKernel, Kernel};
use crate::linalg::{det_lu, leading_minors_spd};
use crate::quad::QuadratureRule;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Diagonal level below which the kernel is cut off.
pub const ENVELOPE_CUTOFF: f64 = 1e-13;
/// Agreement required between a rule and its node-doubled refinement.
pub const REFINE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NystromConfig {
    pub node_count: usize,
    /// Length L of [t, t + L]; `None` picks it from the kernel's diagonal envelope.
    pub interval_length: Option<f64>,
    pub refine: bool,
}

impl Default for NystromConfig {
    fn default() -> Self {
        NystromConfig { node_count: 80, interval_length: None, refine: true }
    }
}

impl NystromConfig {
    pub fn with_nodes(node_count: usize) -> Self {
        NystromConfig { node_count, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.node_count < 8 {
            return Err(Error::Config(format!("node_count {} < 8", self.node_count)));
        }
        if let Some(l) = self.interval_length {
            if !(l > 0.0 && l.is_finite()) {
                return Err(domain("interval_length", l));
            }
        }
        Ok(())
    }
}

/// Smallest x >= from where the diagonal envelope stays below the cutoff.
pub fn truncation_point<K: Kernel + ?Sized>(kernel: &K, from: f64) -> Result<f64> {
    let mut step: f64 = 0.5;
    let mut x = from;
    let mut n = 0;
    while kernel.diag_envelope(x) >= ENVELOPE_CUTOFF {
        x += step;
        n += 1;
        if n % 64 == 0 {
            step *= 2.0;
        }
        if n > 4096 {
            return Err(Error::Numeric(format!("no decay of {} envelope", kernel.label())));
        }
    }
    // back off to the crossing
    let (mut lo, mut hi) = ((x - step).max(from), x);
    if kernel.diag_envelope(lo) < ENVELOPE_CUTOFF {
        return Ok(lo);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if kernel.diag_envelope(mid) < ENVELOPE_CUTOFF {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn upper_end<K: Kernel + ?Sized>(kernel: &K, t: f64, cfg: &NystromConfig) -> Result<f64> {
    if t < kernel.domain_left() {
        return Err(domain("truncation start left of the kernel domain", t));
    }
    match cfg.interval_length {
        Some(l) => {
            if kernel.diag_envelope(t + l) >= ENVELOPE_CUTOFF {
                return Err(Error::Config(format!(
                    "interval length {l} leaves {} envelope {:e} at t + L",
                    kernel.label(),
                    kernel.diag_envelope(t + l)
                )));
            }
            Ok(t + l)
        }
        None => Ok(truncation_point(kernel, t)?.max(t + 1.0)),
    }
}

/// Symmetrized I - W^{1/2} K W^{1/2}.
fn nystrom_matrix<K: Kernel + ?Sized>(kernel: &K, rule: &QuadratureRule) -> DMatrix<f64> {
    let n = rule.len();
    let mut m = kernel.gram(&rule.nodes);
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = if i == j { 1.0 } else { 0.0 } - sw[i] * m[(i, j)] * sw[j];
        }
    }
    m
}

fn det_on<K: Kernel + ?Sized>(kernel: &K, t: f64, end: f64, nodes: usize) -> f64 {
    let rule = QuadratureRule::gauss_legendre(nodes).mapped(t, end);
    det_lu(nystrom_matrix(kernel, &rule))
}

/// det(I - K) on L^2(t, inf).
pub fn fredholm_det<K: Kernel + ?Sized>(kernel: &K, t: f64, cfg: &NystromConfig) -> Result<f64> {
    cfg.validate()?;
    let end = upper_end(kernel, t, cfg)?;
    let coarse = det_on(kernel, t, end, cfg.node_count);
    if !cfg.refine {
        return Ok(coarse);
    }
    let fine = det_on(kernel, t, end, 2 * cfg.node_count);
    if !((fine - coarse).abs() <= REFINE_TOL) {
        return Err(Error::Accuracy { coarse, fine });
    }
    Ok(fine)
}

fn nested_rule(ts: &[f64], end: f64, density: f64) -> QuadratureRule {
    let mut breaks: Vec<f64> = Vec::new();
    let mut cuts: Vec<f64> = ts.to_vec();
    cuts.push(end);
    for w in cuts.windows(2) {
        let panels = ((w[1] - w[0]) * density / 16.0).ceil().max(1.0) as usize;
        for k in 0..panels {
            breaks.push(w[0] + (w[1] - w[0]) * k as f64 / panels as f64);
        }
    }
    breaks.push(end);
    breaks.dedup();
    QuadratureRule::on_breaks(&breaks, &QuadratureRule::gauss_legendre(16))
}

fn nested_dets<K: Kernel + ?Sized>(kernel: &K, ts: &[f64], end: f64, density: f64) -> Vec<f64> {
    let rule = nested_rule(ts, end, density);
    // descending nodes: each [t_k, end] is a leading block
    let n = rule.len();
    let rev = QuadratureRule {
        nodes: rule.nodes.iter().rev().copied().collect(),
        weights: rule.weights.iter().rev().copied().collect(),
        interval: rule.interval,
    };
    let m = nystrom_matrix(kernel, &rev);
    let minors = leading_minors_spd(m.clone());
    ts.iter()
        .map(|&t| {
            let k = rev.nodes.iter().take_while(|&&x| x > t).count();
            match k {
                0 => 1.0,
                k if k <= minors.len() => minors[k - 1],
                k => det_lu(m.view((0, 0), (k, k)).into_owned()),
            }
        })
        .map(|d| if n == 0 { 1.0 } else { d })
        .collect()
}

/// det(I - K) on L^2(t, inf) for every t in `ts` from one discretization.
///
/// Panels break at each t, nodes are ordered from the right, and one Cholesky
/// sweep of I - K yields every leading-block determinant. `node_count` fixes
/// the node density: node_count nodes per length of the widest interval.
pub fn fredholm_det_grid<K: Kernel + ?Sized>(kernel: &K, ts: &[f64], cfg: &NystromConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if ts.is_empty() {
        return Ok(Vec::new());
    }
    let mut sorted: Vec<f64> = ts.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    sorted.dedup();
    let lo = sorted[0];
    let end = upper_end(kernel, lo, cfg)?.max(*sorted.last().unwrap() + 1.0);
    let density = cfg.node_count as f64 / (end - lo);
    let coarse = nested_dets(kernel, &sorted, end, density);
    let chosen = if cfg.refine {
        let fine = nested_dets(kernel, &sorted, end, 2.0 * density);
        let (i, diff) = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).abs())
            .enumerate()
            .fold((0, 0.0), |acc, (i, d)| if d > acc.1 || d.is_nan() { (i, d) } else { acc });
        if !(diff <= REFINE_TOL) {
            return Err(Error::Accuracy { coarse: coarse[i], fine: fine[i] });
        }
        fine
    } else {
        coarse
    };
    Ok(ts
        .iter()
        .map(|t| chosen[sorted.iter().position(|s| s == t).unwrap()])
        .collect())
}

/// F_TW(t) = det(I - K_Airy) on L^2(t, inf), for t >= -12.
pub fn tracy_widom_cdf(t: f64, cfg: &NystromConfig) -> Result<f64> {
    if !(t >= -12.0) {
        return Err(domain("tracy_widom_cdf t", t));
    }
    fredholm_det(&AiryKernel, t, cfg)
}

/// F_alpha(t) = det(I - M_alpha) on L^2(t, inf), for t >= -12.
pub fn f_alpha_cdf(alpha: f64, t: f64, cfg: &NystromConfig) -> Result<f64> {
    let k = InterpolatingKernel::new(alpha)?;
    if !(t >= -12.0) {
        return Err(domain("f_alpha_cdf t", t));
    }
    fredholm_det(&k, t, cfg)
}

/// int_t^{t+L} K(x, x) dx, with t = -inf allowed for kernels whose envelope
/// decays on both sides.
pub fn expected_count<K: Kernel + ?Sized>(kernel: &K, t: f64, cfg: &NystromConfig) -> Result<f64> {
    cfg.validate()?;
    let start = if t == f64::NEG_INFINITY {
        let mut x = -1.0;
        while kernel.diag_envelope(x) >= ENVELOPE_CUTOFF {
            x *= 1.25;
            if x < -1e6 || x < kernel.domain_left() {
                return Err(Error::Config(format!("{} has no left decay", kernel.label())));
            }
        }
        x
    } else {
        t
    };
    let end = if t == f64::NEG_INFINITY {
        match cfg.interval_length {
            Some(l) => start + l,
            None => truncation_point(kernel, 0.0)?,
        }
    } else {
        upper_end(kernel, start, cfg)?
    };
    // panels of at most unit length keep oscillating diagonals resolved
    let panels = ((end - start).ceil() as usize).max(cfg.node_count / 16).max(1);
    let rule = QuadratureRule::composite(start, end, panels, 16);
    let coarse = rule.integrate(|x| kernel.eval(x, x));
    if !cfg.refine {
        return Ok(coarse);
    }
    let fine = QuadratureRule::composite(start, end, 2 * panels, 16).integrate(|x| kernel.eval(x, x));
    if !((fine - coarse).abs() <= REFINE_TOL * fine.abs().max(1.0)) {
        return Err(Error::Accuracy { coarse, fine });
    }
    Ok(fine)
}

/// Partial sums of the Fredholm series with the remainder bound.
#[derive(Debug, Clone, PartialEq)]
pub struct FredholmSeries {
    /// 1, 1 - e_1, 1 - e_1 + e_2, 1 - e_1 + e_2 - e_3.
    pub partial_sums: [f64; 4],
    pub trace: f64,
    /// Bound sum_{k >= 4} tr^k / k! on the neglected terms.
    pub remainder_bound: f64,
}

/// First three terms of det(I - K) = sum_k (-1)^k / k! int det K(x_i, x_j).
///
/// The k-fold integrals are the quadrature sums over node tuples, which equal
/// the elementary symmetric functions of the Nystrom matrix (Newton's identities).
pub fn fredholm_series<K: Kernel + ?Sized>(kernel: &K, t: f64, cfg: &NystromConfig) -> Result<FredholmSeries> {
    cfg.validate()?;
    let end = upper_end(kernel, t, cfg)?;
    let rule = QuadratureRule::gauss_legendre(cfg.node_count).mapped(t, end);
    let a = DMatrix::<f64>::identity(rule.len(), rule.len()) - nystrom_matrix(kernel, &rule);
    let a2 = &a * &a;
    let p1 = a.trace();
    let p2 = a2.trace();
    let p3 = (&a2 * &a).trace();
    let e1 = p1;
    let e2 = (p1 * p1 - p2) / 2.0;
    let e3 = (p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3) / 6.0;
    let tr = p1.abs();
    let mut remainder = 0.0;
    let mut term = tr.powi(3) / 6.0;
    for k in 4..60 {
        term *= tr / k as f64;
        remainder += term;
    }
    Ok(FredholmSeries {
        partial_sums: [1.0, 1.0 - e1, 1.0 - e1 + e2, 1.0 - e1 + e2 - e3],
        trace: p1,
        remainder_bound: remainder,
    })
}

/// A CDF tabulated on unit panels of 16 Chebyshev points and evaluated by
/// barycentric interpolation; 0 below and 1 above the table.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    lo: f64,
    panels: usize,
    values: Vec<f64>,
}

const CHEB: usize = 16;

fn cheb_node(k: usize) -> f64 {
    // second-kind points on [-1, 1], ascending
    -(PI * k as f64 / (CHEB - 1) as f64).cos()
}

impl CdfTable {
    /// Tabulate `f` on [lo, hi] (hi - lo rounded up to whole panels).
    pub fn build(lo: f64, hi: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<Self> {
        let panels = ((hi - lo).ceil() as usize).max(1);
        let mut values = Vec::with_capacity(panels * CHEB);
        for p in 0..panels {
            for k in 0..CHEB {
                values.push(f(lo + p as f64 + 0.5 * (cheb_node(k) + 1.0))?);
            }
        }
        Ok(CdfTable { lo, panels, values })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.lo + self.panels as f64)
    }

    /// Points at which `build` evaluates its function.
    pub fn nodes(lo: f64, hi: f64) -> Vec<f64> {
        let panels = ((hi - lo).ceil() as usize).max(1);
        (0..panels)
            .flat_map(|p| (0..CHEB).map(move |k| lo + p as f64 + 0.5 * (cheb_node(k) + 1.0)))
            .collect()
    }

    /// Build from values already computed at `nodes(lo, hi)`.
    pub fn from_values(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self> {
        let panels = ((hi - lo).ceil() as usize).max(1);
        if values.len() != panels * CHEB {
            return Err(Error::Config(format!("expected {} table values, got {}", panels * CHEB, values.len())));
        }
        Ok(CdfTable { lo, panels, values })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.range();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let p = ((x - lo).floor() as usize).min(self.panels - 1);
        let s = 2.0 * (x - lo - p as f64) - 1.0;
        let v = &self.values[p * CHEB..(p + 1) * CHEB];
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..CHEB {
            let d = s - cheb_node(k);
            if d == 0.0 {
                return v[k];
            }
            let mut w = if k % 2 == 0 { 1.0 } else { -1.0 } / d;
            if k == 0 || k == CHEB - 1 {
                w *= 0.5;
            }
            num += w * v[k];
            den += w;
        }
        num / den
    }
}

/// F_TW tabulated on [-12, 8].
pub fn tracy_widom_table(cfg: &NystromConfig) -> Result<CdfTable> {
    CdfTable::build(-12.0, 8.0, |t| tracy_widom_cdf(t, cfg))
}

#[cfg(feature = "std")]
mod memo {
    use super::*;
    use std::collections::HashMap;
    use std::string::String;
    use std::sync::RwLock;

    /// Memo of determinant values keyed by (kernel label, t, config); reads
    /// share the lock, inserts take it exclusively.
    type MemoKey = (String, u64, usize, Option<u64>, bool);

    #[derive(Debug, Default)]
    pub struct DetMemo {
        table: RwLock<HashMap<MemoKey, f64>>,
    }

    impl DetMemo {
        pub fn new() -> Self {
            Self::default()
        }

        pub fn fredholm_det<K: Kernel + ?Sized>(&self, kernel: &K, t: f64, cfg: &NystromConfig) -> Result<f64> {
            let key = (
                kernel.label(),
                t.to_bits(),
                cfg.node_count,
                cfg.interval_length.map(f64::to_bits),
                cfg.refine,
            );
            if let Some(&v) = self.table.read().expect("memo lock").get(&key) {
                return Ok(v);
            }
            let v = fredholm_det(kernel, t, cfg)?;
            self.table.write().expect("memo lock").insert(key, v);
            Ok(v)
        }

        pub fn len(&self) -> usize {
            self.table.read().expect("memo lock").len()
        }

        pub fn is_empty(&self) -> bool {
            self.len() == 0
        }
    }
}

#[cfg(feature = "std")]
pub use memo::DetMemo;
