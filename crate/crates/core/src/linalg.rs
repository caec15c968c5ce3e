//! Jacobi-type spectral routines for the small dense matrices used here.
//!
//! Singular values come from one-sided (Hestenes) Jacobi, which keeps relative accuracy
//! for small singular values. That matters for trace norms of near-singular differences
//! of density operators, where squaring into `A^dagger A` would lose half the digits.

use alloc::vec::Vec;

use crate::matrix::{CMatrix, Complex};

const MAX_SWEEPS: usize = 64;

/// Singular values of `a`, sorted descending; `min(rows, cols)` values.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    // Work on the orientation with at most as many columns as rows.
    let work = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.adjoint()
    };
    let (m, n) = work.shape();
    // Column-major copy so each column is contiguous.
    let mut cols: Vec<Vec<Complex>> = (0..n)
        .map(|j| (0..m).map(|i| work.get(i, j)).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (left, right) = cols.split_at_mut(q);
                if orthogonalize_pair(&mut left[p], &mut right[0]) {
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = cols.iter().map(|c| crate::matrix::vec_norm(c)).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Rotates columns `a` and `b` so they become orthogonal. Returns `false` when they
/// already are (to working precision).
fn orthogonalize_pair(a: &mut [Complex], b: &mut [Complex]) -> bool {
    let alpha: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let beta: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    let gamma: Complex = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    let g = gamma.norm();
    if g == 0.0 || g <= f64::EPSILON * libm::sqrt(alpha * beta) {
        return false;
    }
    // Strip the phase of <a, b> so the remaining rotation is real.
    let phase = (gamma / g).conj();
    let zeta = (beta - alpha) / (2.0 * g);
    let t = if zeta.abs() > 1e150 {
        0.5 / zeta
    } else {
        zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = c * t;
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let ap = *x;
        let aq = *y * phase;
        *x = ap * c - aq * s;
        *y = ap * s + aq * c;
    }
    true
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// `H = X + iY` is embedded as the real symmetric `[[X, -Y], [Y, X]]`, whose spectrum is
/// that of `H` with every eigenvalue doubled; cyclic Jacobi is run on the embedding and
/// every other eigenvalue is kept. Only the Hermitian part of `h` is seen.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    assert!(h.is_square(), "eigenvalues need a square matrix");
    let n = h.rows();
    let dim = 2 * n;
    let mut a = alloc::vec![0.0f64; dim * dim];
    for i in 0..n {
        for j in 0..n {
            let z = (h.get(i, j) + h.get(j, i).conj()) * 0.5;
            a[i * dim + j] = z.re;
            a[(i + n) * dim + (j + n)] = z.re;
            a[i * dim + (j + n)] = -z.im;
            a[(i + n) * dim + j] = z.im;
        }
    }
    let mut eig = symmetric_eigenvalues(&mut a, dim);
    eig.sort_by(f64::total_cmp);
    eig.into_iter().step_by(2).collect()
}

/// Cyclic Jacobi eigenvalue iteration on a real symmetric `n x n` row-major matrix.
/// The matrix is overwritten.
pub fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v = a[i * n + j] * a[i * n + j];
                total += v;
                if i != j {
                    off += v;
                }
            }
        }
        if off == 0.0 || off <= 1e-32 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = CMatrix::from_rows(vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
            .unwrap();
        let e = hermitian_eigenvalues(&y);
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rectangular_singular_values() {
        // [[3, 0], [4, 0], [0, 2]]: columns orthogonal with norms 5 and 2.
        let a = CMatrix::from_real(&[&[3.0, 0.0], &[4.0, 0.0], &[0.0, 2.0]]).unwrap();
        let s = singular_values(&a);
        assert_eq!(s.len(), 2);
        assert!((s[0] - 5.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14);
        let t = singular_values(&a.adjoint());
        assert!((t[0] - 5.0).abs() < 1e-14 && (t[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn complex_rank_one() {
        // |u><v| with |u| = sqrt(2), |v| = sqrt(5): single singular value sqrt(10).
        let u = [c(1.0, 0.0), c(0.0, 1.0)];
        let v = [c(1.0, 2.0), c(0.0, 0.0)];
        let s = singular_values(&CMatrix::outer(&u, &v));
        assert!((s[0] - libm::sqrt(10.0)).abs() < 1e-14);
        assert!(s[1].abs() < 1e-14);
    }

    #[test]
    fn symmetric_two_by_two() {
        let mut a = [2.0, 1.0, 1.0, 2.0];
        let mut e = symmetric_eigenvalues(&mut a, 2);
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }
}
