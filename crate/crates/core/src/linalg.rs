//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Largest singular value.
pub fn op_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Largest singular value of a complex matrix.
pub fn op_norm_c(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Number of singular values above `rel_tol · max(1, σ_max)`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let cutoff = rel_tol * sv.max().max(1.0);
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Basis of the null space (columns), singular values below `rel_tol · max(1, σ_max)`.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad to a square-or-tall shape so that the SVD returns a full V.
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let cutoff = rel_tol * svd.singular_values.max().max(1.0);
    let null: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    if null.is_empty() {
        DMatrix::zeros(cols, 0)
    } else {
        DMatrix::from_columns(&null)
    }
}

/// Eigen-decomposition of a hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues and the unitary whose columns are the
/// eigenvectors. Accurate to a few ulps of `‖m‖`, unlike nalgebra's complex
/// QR path on nearly degenerate spectra.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let mut a = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let scale = a.norm().max(f64::MIN_POSITIVE);
    for _ in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= f64::EPSILON * 1e-2 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let r = a[(p, q)].norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                // phase q so that a_pq becomes real and positive
                let w = a[(p, q)] / r;
                let d = w.conj();
                for k in 0..n {
                    a[(k, q)] *= d;
                    v[(k, q)] *= d;
                }
                for k in 0..n {
                    a[(q, k)] *= w;
                }
                a[(p, q)] = Complex64::new(r, 0.0);
                a[(q, p)] = Complex64::new(r, 0.0);

                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (kp, kq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = kp * c - kq * s;
                    a[(k, q)] = kp * s + kq * c;
                    let (vp, vq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vp * c - vq * s;
                    v[(k, q)] = vp * s + vq * c;
                }
                for k in 0..n {
                    let (pk, qk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = pk * c - qk * s;
                    a[(q, k)] = pk * s + qk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// Eigenvalues of a hermitian matrix via [`hermitian_eigen`].
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Minimal eigenvalue of a hermitian complex matrix.
pub fn min_eigenvalue_c(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Moore–Penrose pseudo-inverse with the same relative cutoff as [`numerical_rank`].
pub fn pseudo_inverse(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let svd = m.clone().svd(true, true);
    let cutoff = rel_tol * svd.singular_values.max().max(1.0);
    svd.pseudo_inverse(cutoff).expect("U and V were computed")
}
