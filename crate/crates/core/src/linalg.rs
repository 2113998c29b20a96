//! Dense complex linear algebra used throughout the crate.
//!
//! Everything is built on `nalgebra` dynamic matrices over `Complex64`.
//! Vectorization of an `n×n` matrix is column-major, matching nalgebra's
//! storage; the choice only matters for rank and least-squares decisions.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a square matrix from real row-major entries.
pub fn real_matrix(n: usize, rows: &[f64]) -> CMatrix {
    assert_eq!(rows.len(), n * n);
    CMatrix::from_row_iterator(n, n, rows.iter().map(|&x| c64(x, 0.0)))
}

pub fn diag(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(entries))
}

/// Pauli matrices, in the usual basis.
pub fn pauli_x() -> CMatrix {
    real_matrix(2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    real_matrix(2, &[1.0, 0.0, 0.0, -1.0])
}

/// Kronecker product `a ⊗ b`; the left factor indexes the slow coordinate.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

/// Frobenius norm of `a - b`.
pub fn frob_dist(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let scale = m.camax();
    if scale == 0.0 {
        return 0.0;
    }
    // Scaling keeps the SVD away from under/overflow on extreme inputs.
    let scaled = m.map(|z| z / scale);
    let sv = scaled.singular_values();
    sv.iter().cloned().fold(0.0, f64::max) * scale
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Numerical rank with a cutoff relative to the largest singular value.
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        None => 0,
        Some(&0.0) => 0,
        Some(&top) => sv.iter().filter(|&&s| s > rel_tol * top).count(),
    }
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// ascending; column `k` of the returned matrix belongs to eigenvalue `k`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let herm = hermitian_part(m);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// Orthonormal basis (as columns) of the approximate kernel of a Hermitian
/// positive semidefinite matrix: eigenvectors with eigenvalue at most
/// `rel_tol * max(1, λ_max)`.
pub fn psd_kernel(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let top = values.last().cloned().unwrap_or(0.0).max(1.0);
    let cols: Vec<usize> = (0..values.len()).filter(|&k| values[k] <= rel_tol * top).collect();
    select_columns(&vectors, &cols)
}

pub fn select_columns(m: &CMatrix, cols: &[usize]) -> CMatrix {
    let mut out = CMatrix::zeros(m.nrows(), cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        out.set_column(dst, &m.column(src));
    }
    out
}

/// Stacks column vectors into a matrix.
pub fn columns(vectors: &[CVector], nrows: usize) -> CMatrix {
    let mut out = CMatrix::zeros(nrows, vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        out.set_column(k, v);
    }
    out
}

/// Unitary polar factor of a square matrix.
pub fn unitary_polar_factor(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    u * v_t
}

/// Dimension of the commutant `{X : X A_i = A_i X for all i}` of a family
/// of `k×k` matrices, computed as the kernel of the stacked commutator map.
pub fn commutant_dimension(family: &[CMatrix], rel_tol: f64) -> usize {
    commutant_basis(family, rel_tol).ncols()
}

/// Kernel of the commutator map `X ↦ (X A_i - A_i X)_i`, as vectorized
/// matrices in the columns of the result.
pub fn commutant_basis(family: &[CMatrix], rel_tol: f64) -> CMatrix {
    let k = family.first().map(|m| m.nrows()).unwrap_or(0);
    let id = identity(k);
    let mut normal = CMatrix::zeros(k * k, k * k);
    for a in family {
        // column-major vec: vec(XA) = (Aᵀ ⊗ I) vec X, vec(AX) = (I ⊗ A) vec X
        let op = kron(&a.transpose(), &id) - kron(&id, a);
        normal += op.adjoint() * &op;
    }
    psd_kernel(&normal, rel_tol)
}

/// Greedy column selection: keeps each candidate whose component orthogonal
/// to the previously kept ones has norm above `rel_tol` times its own norm.
/// Returns the indices kept.
pub fn independent_subset(candidates: &[CVector], rel_tol: f64) -> Vec<usize> {
    let mut ortho: Vec<CVector> = Vec::new();
    let mut kept = Vec::new();
    for (idx, v) in candidates.iter().enumerate() {
        let norm = v.norm();
        if norm == 0.0 {
            continue;
        }
        let mut r = v.clone();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &ortho {
                let proj = q.dotc(&r);
                r.axpy(-proj, q, ONE);
            }
        }
        let rn = r.norm();
        if rn > rel_tol * norm {
            ortho.push(r.unscale(rn));
            kept.push(idx);
        }
    }
    kept
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn operator_norm_examples() {
        assert_relative_eq!(operator_norm(&pauli_x()), 1.0, max_relative = 1e-12);
        assert_eq!(operator_norm(&CMatrix::zeros(3, 3)), 0.0);
        let m = diag(&[c64(3.0, 0.0), c64(0.0, -4.0)]);
        assert_relative_eq!(operator_norm(&m), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn hermitian_eigen_is_sorted_and_reconstructs() {
        let m = pauli_x() + pauli_z().map(|z| z * 2.0);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(vals[0] <= vals[1]);
        let d = diag(&vals.iter().map(|&v| c64(v, 0.0)).collect::<Vec<_>>());
        let back = &vecs * d * vecs.adjoint();
        assert!(frob_dist(&back, &m) < 1e-12);
    }

    #[test]
    fn commutant_of_full_matrix_algebra_is_scalars() {
        let fam = vec![pauli_x(), pauli_y(), pauli_z()];
        assert_eq!(commutant_dimension(&fam, 1e-9), 1);
        let diag_only = vec![pauli_z()];
        assert_eq!(commutant_dimension(&diag_only, 1e-9), 2);
    }

    #[test]
    fn independent_subset_drops_dependent_vectors() {
        let a = CVector::from_vec(vec![ONE, ZERO]);
        let b = CVector::from_vec(vec![c64(2.0, 0.0), ZERO]);
        let c = CVector::from_vec(vec![ONE, ONE]);
        assert_eq!(independent_subset(&[a, b, c], 1e-10), vec![0, 2]);
    }

    #[test]
    fn polar_factor_of_unitary_is_itself() {
        let u = pauli_y();
        assert!(frob_dist(&unitary_polar_factor(&u), &u) < 1e-12);
    }
}
