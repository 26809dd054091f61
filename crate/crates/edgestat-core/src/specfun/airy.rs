//! Airy function Ai and its derivative on the real line.
//!
//! For |x| <= 9 the value comes from a short Taylor expansion about the nearest
//! anchor of a quarter-spaced table. The anchors are Maclaurin sums evaluated in
//! double-double arithmetic at compile time, so the cancellation between the two
//! Maclaurin series for negative x never reaches the f64 result. Beyond |x| = 9
//! the standard asymptotic expansions are used.

use crate::dd::Dd;
use crate::error::{domain, Result};
use core::f64::consts::{FRAC_PI_4, PI};
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Largest |x| accepted by the public entry points.
pub const AIRY_MAX_ABS: f64 = 200.0;

const AI0: Dd = Dd::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const NEG_AIP0: Dd = Dd::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

const ANCHOR_LO: f64 = -9.0;
const ANCHOR_STEP: f64 = 0.25;
const ANCHOR_COUNT: usize = 73;
const SERIES_LIMIT: f64 = 9.0;

const fn maclaurin(x: f64) -> (f64, f64) {
    let xd = Dd::from_f64(x);
    let x3 = xd.mul(xd).mul(xd);
    let mut t = Dd::from_f64(1.0);
    let mut f = t;
    let mut u = xd;
    let mut g = u;
    let mut a = xd.mul(xd).div_f64(2.0);
    let mut fp = a;
    let mut b = Dd::from_f64(1.0);
    let mut gp = b;
    let mut k = 1;
    while k < 400 {
        let kf = k as f64;
        t = t.mul(x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf));
        u = u.mul(x3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        b = b.mul(x3).div_f64((3.0 * kf) * (3.0 * kf - 2.0));
        f = f.add(t);
        g = g.add(u);
        gp = gp.add(b);
        if k >= 2 {
            a = a.mul(x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
            fp = fp.add(a);
        }
        let biggest = t.abs_hi() + u.abs_hi() + a.abs_hi() + b.abs_hi();
        if k > 3 && biggest < 1e-40 {
            break;
        }
        k += 1;
    }
    let ai = AI0.mul(f).sub(NEG_AIP0.mul(g));
    let aip = AI0.mul(fp).sub(NEG_AIP0.mul(gp));
    (ai.to_f64(), aip.to_f64())
}

const fn build_anchors() -> [(f64, f64); ANCHOR_COUNT] {
    let mut out = [(0.0, 0.0); ANCHOR_COUNT];
    let mut k = 0;
    while k < ANCHOR_COUNT {
        out[k] = maclaurin(ANCHOR_LO + ANCHOR_STEP * k as f64);
        k += 1;
    }
    out
}

static ANCHORS: [(f64, f64); ANCHOR_COUNT] = build_anchors();

fn taylor(x: f64) -> (f64, f64) {
    let k = (((x - ANCHOR_LO) / ANCHOR_STEP).round() as isize).clamp(0, ANCHOR_COUNT as isize - 1)
        as usize;
    let x0 = ANCHOR_LO + ANCHOR_STEP * k as f64;
    let h = x - x0;
    let (a, b) = ANCHORS[k];
    // y'' = x y gives c_{k+2} (k+2)(k+1) = x0 c_k + c_{k-1}
    let (mut cm1, mut c0, mut c1) = (a, b, x0 * a / 2.0);
    let mut y = a + b * h + c1 * h * h;
    let mut yp = b + 2.0 * c1 * h;
    let mut hk = h * h;
    let mut quiet = 0;
    for n in 1..80 {
        let c2 = (x0 * c0 + cm1) / ((n + 2) as f64 * (n + 1) as f64);
        let hk1 = hk * h;
        let term = c2 * hk1;
        y += term;
        yp += (n + 2) as f64 * c2 * hk;
        hk = hk1;
        cm1 = c0;
        c0 = c1;
        c1 = c2;
        if term.abs() <= 1e-18 * y.abs() || term == 0.0 {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (y, yp)
}

fn coefficient_step(u: f64, k: usize) -> f64 {
    let kf = k as f64;
    u * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf)
}

fn decaying(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (mut su, mut sv) = (1.0, 1.0);
    let mut u = 1.0;
    let mut last = f64::INFINITY;
    let mut zk = 1.0;
    for k in 1..60 {
        u = coefficient_step(u, k);
        let v = -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u;
        zk *= -zeta;
        let tu = u / zk;
        if tu.abs() > last {
            break;
        }
        su += tu;
        sv += v / zk;
        last = tu.abs();
        if last < 1e-18 {
            break;
        }
    }
    let x14 = x.sqrt().sqrt();
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    (e / x14 * su, -x14 * e * sv)
}

fn oscillating(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let (mut p, mut q, mut r, mut s) = (1.0, 0.0, 1.0, 0.0);
    let mut u = 1.0;
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..80 {
        u = coefficient_step(u, k);
        let v = -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u;
        zk *= zeta;
        let tu = u / zk;
        if tu.abs() > last {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * tu;
            r += sign * v / zk;
        } else {
            q += sign * tu;
            s += sign * v / zk;
        }
        last = tu.abs();
        if last < 1e-18 {
            break;
        }
    }
    let (sn, cs) = zeta.sin_cos();
    let c = (cs + sn) * FRAC_PI_4.cos();
    let sn4 = (sn - cs) * FRAC_PI_4.sin();
    let z14 = z.sqrt().sqrt();
    let rp = 1.0 / PI.sqrt();
    (
        rp / z14 * (c * p + sn4 * q),
        rp * z14 * (sn4 * r - c * s),
    )
}

/// (Ai(x), Ai'(x)) for any real x; values past the underflow point are 0.
pub(crate) fn airy_pair_unchecked(x: f64) -> (f64, f64) {
    if x.abs() <= SERIES_LIMIT {
        taylor(x)
    } else if x > 0.0 {
        if x > AIRY_MAX_ABS {
            (0.0, 0.0)
        } else {
            decaying(x)
        }
    } else {
        oscillating(-x)
    }
}

#[inline]
pub(crate) fn ai_unchecked(x: f64) -> f64 {
    airy_pair_unchecked(x).0
}

/// (Ai(x), Ai'(x)) for |x| <= 200.
pub fn airy_pair(x: f64) -> Result<(f64, f64)> {
    if !(x.abs() <= AIRY_MAX_ABS) {
        return Err(domain("airy_ai", x));
    }
    Ok(airy_pair_unchecked(x))
}

/// Airy function of the first kind, absolute error below 1e-12 for |x| <= 30.
pub fn airy_ai(x: f64) -> Result<f64> {
    airy_pair(x).map(|p| p.0)
}

/// Derivative Ai'(x).
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    airy_pair(x).map(|p| p.1)
}
