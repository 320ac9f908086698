//! Dense complex matrix helpers shared by the algebra and operator layers.
//!
//! Everything here works on plain [`CMatrix`] blocks; the algebra structure
//! (which block belongs to which summand, relative tolerances) is handled by
//! the callers. Hermitian eigenproblems and singular value factorizations are
//! delegated to nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Singular values in descending order, computed from the Hermitian
/// eigendecomposition of the smaller Gram matrix.
///
/// The dense bidiagonalization route mispairs singular vectors on some
/// inputs; the Gram route stays on the well-tested Hermitian eigensolver.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let k = m.nrows().min(m.ncols());
    if k == 0 {
        return Vec::new();
    }
    let gram = if m.ncols() <= m.nrows() {
        m.adjoint() * m
    } else {
        m * m.adjoint()
    };
    let (values, _) = hermitian_eigen(&gram);
    values
        .iter()
        .rev()
        .map(|&v| v.max(0.0).sqrt())
        .collect()
}

/// Operator norm (largest singular value); zero for empty matrices.
pub fn opnorm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    singular_values(m)[0]
}

/// Largest entrywise deviation from being Hermitian, `max |m - m^H|`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns, so
/// `m = Q diag(lambda) Q^H`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), m.clone());
    }
    // Symmetrize first so tiny non-Hermitian noise cannot sneak in.
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Singular value factorization `m = u * diag(sigma) * v^H` with the
/// singular values sorted descending.
///
/// Built on the Hermitian eigensolver: `v` are the eigenvectors of
/// `m^H m`, `u_i = m v_i / sigma_i`. Columns paired with numerically zero
/// singular values are left as zero; they never contribute to the
/// factorization.
pub fn svd_parts(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let k = m.nrows().min(m.ncols());
    if k == 0 {
        return (
            CMatrix::zeros(m.nrows(), 0),
            Vec::new(),
            CMatrix::zeros(m.ncols(), 0),
        );
    }
    if m.ncols() > m.nrows() {
        // m^H = u s v^H implies m = v s u^H
        let (u, sigma, v) = svd_parts(&m.adjoint());
        return (v, sigma, u);
    }
    let gram = m.adjoint() * m;
    let (values, q) = hermitian_eigen(&gram);
    let top = values.last().copied().unwrap_or(0.0).max(0.0);
    let negligible = (f64::EPSILON * top.max(f64::MIN_POSITIVE)).sqrt() * 1e-2;
    let mut sigma = Vec::with_capacity(k);
    let mut u = CMatrix::zeros(m.nrows(), k);
    let mut v = CMatrix::zeros(m.ncols(), k);
    for (c, i) in (0..k).rev().enumerate() {
        let s = values[i].max(0.0).sqrt();
        sigma.push(s);
        let vi = q.column(i);
        v.column_mut(c).copy_from(&vi);
        if s > negligible {
            let ui = (m * vi).unscale(s);
            u.column_mut(c).copy_from(&ui);
        }
    }
    (u, sigma, v)
}

/// Right polar factorization `m = v * r` with `r = (m^H m)^{1/2}` positive
/// and `v` a partial isometry whose initial space is the range of `r`.
/// Singular values at or below `threshold` are treated as zero.
pub fn right_polar(m: &CMatrix, threshold: f64) -> (CMatrix, CMatrix) {
    let (u, sigma, v) = svd_parts(m);
    let mut r = CMatrix::zeros(m.ncols(), m.ncols());
    let mut iso = CMatrix::zeros(m.nrows(), m.ncols());
    for (i, s) in sigma.iter().enumerate() {
        let vi = v.column(i);
        r += (vi * vi.adjoint()).scale(*s);
        if *s > threshold {
            iso += u.column(i) * vi.adjoint();
        }
    }
    (iso, r)
}

/// Orthonormal basis (as columns) of the range of a Hermitian idempotent.
pub fn projection_range_basis(p: &CMatrix) -> CMatrix {
    let (values, q) = hermitian_eigen(p);
    let cols: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0.5).collect();
    CMatrix::from_fn(p.nrows(), cols.len(), |r, c| q[(r, cols[c])])
}

/// Orthonormal rows `w` with `w * m ~ 0`, i.e. the numerical left kernel.
///
/// Computed from the Hermitian eigendecomposition of `m m^H`: an eigenvector
/// with eigenvalue `lambda` gives a row of residual `sqrt(lambda)`. Rows are
/// returned for `sqrt(lambda) <= sv_threshold`.
pub fn left_kernel_rows(m: &CMatrix, sv_threshold: f64) -> CMatrix {
    let rows = m.nrows();
    if rows == 0 {
        return CMatrix::zeros(0, 0);
    }
    let gram = m * m.adjoint();
    let (values, q) = hermitian_eigen(&gram);
    let keep: Vec<usize> = (0..rows)
        .filter(|&i| values[i].max(0.0).sqrt() <= sv_threshold)
        .collect();
    let mut out = CMatrix::zeros(keep.len(), rows);
    for (r, &i) in keep.iter().enumerate() {
        for c in 0..rows {
            out[(r, c)] = q[(c, i)].conj();
        }
    }
    out
}

/// Unitary factor of a QR factorization; deterministic for a fixed input.
pub fn qr_unitary(m: &CMatrix) -> CMatrix {
    m.clone().qr().q()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_eigen_recomposes() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let (values, q) = hermitian_eigen(&m);
        let mut diag = CMatrix::zeros(2, 2);
        diag[(0, 0)] = c(values[0], 0.0);
        diag[(1, 1)] = c(values[1], 0.0);
        let back = &q * diag * q.adjoint();
        assert!(opnorm(&(&m - back)) < 1e-12);
        assert!(values[0] <= values[1]);
    }

    #[test]
    fn right_polar_nilpotent() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let (v, r) = right_polar(&m, 1e-12);
        assert!(opnorm(&(&v * &r - &m)) < 1e-12);
        // v e_2 = e_1, v e_1 = 0
        assert!((v[(0, 1)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((r[(1, 1)] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn left_kernel_detects_relation() {
        // rows (1,0), (0,1), (1,0): kernel spanned by (1,0,-1)/sqrt(2)
        let m = CMatrix::from_row_slice(
            3,
            2,
            &[
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
            ],
        );
        let k = left_kernel_rows(&m, 1e-9);
        assert_eq!(k.nrows(), 1);
        assert!(opnorm(&(&k * &m)) < 1e-9);
        let ratio = k[(0, 0)] / k[(0, 2)];
        assert!((ratio + c(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn empty_matrices_are_tolerated() {
        let m = CMatrix::zeros(0, 0);
        assert_eq!(opnorm(&m), 0.0);
        let (values, _) = hermitian_eigen(&m);
        assert!(values.is_empty());
    }
}
