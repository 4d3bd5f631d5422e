//! Dense complex Hermitian eigendecomposition by the Jacobi rotation method.
//!
//! Matrices here are tiny (one row per conjugacy class), so Jacobi's
//! robustness beats anything fancier.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

pub type CMat = Vec<Vec<Complex64>>;

fn off_norm(a: &CMat) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j].norm_sqr();
            }
        }
    }
    s
}

/// Eigen-decomposition of a Hermitian matrix; returns (eigenvalues,
/// eigenvectors as columns), unsorted.
pub fn hermitian_eigen(a_in: &CMat) -> (Vec<f64>, CMat) {
    let n = a_in.len();
    let mut a = a_in.clone();
    let mut v: CMat = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    let scale: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().max(1e-300);
    let tol = 1e-26 * scale;
    for _sweep in 0..60 {
        if off_norm(&a) < tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.norm_sqr() < tol / (n * n) as f64 {
                    continue;
                }
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let abs = apq.norm();
                let phase = apq / abs;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                // Columns: col_p' = c col_p - s conj(phase) col_q is absorbed
                // in the explicit row/column updates below.
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = aip * c - aiq * s * phase.conj();
                    a[i][q] = aip * s * phase + aiq * c;
                }
                for j in 0..n {
                    let apj = a[p][j];
                    let aqj = a[q][j];
                    a[p][j] = apj * c - aqj * s * phase;
                    a[q][j] = apj * s * phase.conj() + aqj * c;
                }
                for i in 0..n {
                    let vip = v[i][p];
                    let viq = v[i][q];
                    v[i][p] = vip * c - viq * s * phase.conj();
                    v[i][q] = vip * s * phase + viq * c;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[i][i].re).collect();
    (vals, v)
}

/// Multiplies `m * x` for a column vector.
pub fn mat_vec(m: &CMat, x: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}
