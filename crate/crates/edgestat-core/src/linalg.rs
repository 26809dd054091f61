//! Dense and tridiagonal linear algebra helpers.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Determinant through LU factorization with partial pivoting.
pub fn det_lu(m: DMatrix<f64>) -> f64 {
    m.lu().determinant()
}

/// Determinants of all leading principal submatrices of a symmetric positive
/// definite matrix, from one Cholesky sweep. The sweep stops at the first
/// non-positive pivot, so a short result marks where definiteness was lost.
pub fn leading_minors_spd(mut m: DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(n);
    let mut log_det = 0.0;
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= m[(j, k)] * m[(j, k)];
        }
        if !(d > 0.0) {
            return out;
        }
        let l = d.sqrt();
        m[(j, j)] = l;
        log_det += d.ln();
        out.push(log_det.exp());
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= m[(i, k)] * m[(j, k)];
            }
            m[(i, j)] = s / l;
        }
    }
    out
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Eigenvalues of a complex Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Number of eigenvalues strictly greater than `x` of the symmetric tridiagonal
/// matrix with diagonal `d` and squared off-diagonal `e2`.
pub fn sturm_count_above(d: &[f64], e2: &[f64], x: f64) -> usize {
    let mut below = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        below += 1;
    }
    for i in 1..d.len() {
        let prev = if q == 0.0 { f64::EPSILON * (1.0 + x.abs()) } else { q };
        q = d[i] - x - e2[i - 1] / prev;
        if q < 0.0 {
            below += 1;
        }
    }
    d.len() - below
}

/// The `k` largest eigenvalues (descending) of a symmetric tridiagonal matrix,
/// by bisection on Sturm counts.
pub fn tridiagonal_top_eigenvalues(d: &[f64], e2: &[f64], k: usize) -> Vec<f64> {
    let n = d.len();
    let k = k.min(n);
    // Gershgorin interval
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e2[i - 1].sqrt() } else { 0.0 } + if i + 1 < n { e2[i].sqrt() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let pad = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    lo -= pad;
    hi += pad;
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        // the (j+1)-th largest eigenvalue is the smallest x with count_above(x) <= j
        let (mut a, mut b) = (lo, if j == 0 { hi } else { out[j - 1] + pad });
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if sturm_count_above(d, e2, mid) <= j {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 2.0 * f64::EPSILON * (a.abs().max(b.abs())) + f64::MIN_POSITIVE {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}
