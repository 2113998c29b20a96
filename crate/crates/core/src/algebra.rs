//! Finite-dimensional Z₂-graded *-algebras realized as unital
//! *-subalgebras of `n×n` complex matrices, graded by `θ = Ad_Q` for a
//! self-adjoint unitary `Q`.
//!
//! A validated [`GradedAlgebra`] always carries a basis of θ-homogeneous
//! matrices together with the structure constants `bᵢbⱼ = Σ_k c_{ijk} b_k`
//! and the involution table `bᵢ* = Σ_k s_{ik} b_k`. Every sign rule in the
//! crate reads parities off this basis, so homogeneity is enforced here.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, c64, frob_dist, identity, independent_subset, operator_norm, vectorize, CMatrix,
    CVector, ONE, ZERO,
};
use crate::tolerance::Tolerances;

/// Coefficients smaller than this are dropped from sparse tables.
pub(crate) const SPARSE_CUTOFF: f64 = 1e-13;

/// Grade of a homogeneous element or vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_sign(sign: i8) -> Option<Parity> {
        match sign {
            1 => Some(Parity::Even),
            -1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn signf(self) -> f64 {
        self.sign() as f64
    }

    /// Parity of a product of homogeneous elements.
    pub fn compose(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Result of a homogeneity test: `+1`, `-1`, or neither.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grade {
    Even,
    Odd,
    Mixed,
}

impl Grade {
    pub fn parity(self) -> Option<Parity> {
        match self {
            Grade::Even => Some(Parity::Even),
            Grade::Odd => Some(Parity::Odd),
            Grade::Mixed => None,
        }
    }
}

impl From<Parity> for Grade {
    fn from(p: Parity) -> Grade {
        match p {
            Parity::Even => Grade::Even,
            Parity::Odd => Grade::Odd,
        }
    }
}

/// Koszul sign of a pair of homogeneous elements: `-1` iff both are odd.
pub fn sign_eps(g1: Grade, g2: Grade) -> Result<i8> {
    match (g1.parity(), g2.parity()) {
        (Some(a), Some(b)) => Ok(sign_eps_tilde(a, b)),
        _ => Err(Error::MixedGrade),
    }
}

/// Koszul sign on grade labels: `-1` iff `i = j = -1`.
pub fn sign_eps_tilde(i: Parity, j: Parity) -> i8 {
    if i == Parity::Odd && j == Parity::Odd {
        -1
    } else {
        1
    }
}

/// Sparse rows of complex coefficients, one row per key.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseTable {
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseTable {
    pub fn new(rows: Vec<Vec<(usize, Complex64)>>) -> Self {
        SparseTable { rows }
    }

    pub fn from_dense_rows<'a>(rows: impl IntoIterator<Item = &'a [Complex64]>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, c)| c.norm() > SPARSE_CUTOFF)
                    .map(|(k, &c)| (k, c))
                    .collect()
            })
            .collect();
        SparseTable { rows }
    }

    pub fn row(&self, key: usize) -> &[(usize, Complex64)] {
        &self.rows[key]
    }

    pub fn row_mut(&mut self, key: usize) -> &mut Vec<(usize, Complex64)> {
        &mut self.rows[key]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

/// Raw input: basis matrices and grading unitary, before validation.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    pub ambient_dim: usize,
    pub basis: Vec<CMatrix>,
    pub grading_unitary: CMatrix,
}

/// A validated Z₂-graded finite-dimensional *-algebra of matrices.
#[derive(Clone)]
pub struct GradedAlgebra {
    ambient_dim: usize,
    basis: Vec<CMatrix>,
    parities: Vec<Parity>,
    grading: CMatrix,
    products: SparseTable,
    involution: SparseTable,
    unit: Vec<Complex64>,
    /// Left inverse of the vectorized basis (`d × n²`).
    coordinates: CMatrix,
    tol: Tolerances,
}

impl fmt::Debug for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedAlgebra")
            .field("ambient_dim", &self.ambient_dim)
            .field("dim", &self.dim())
            .field("even_dim", &self.even_indices().len())
            .finish()
    }
}

/// Validates raw basis matrices and a grading unitary with default tolerances.
pub fn validate_algebra(spec: &AlgebraSpec) -> Result<GradedAlgebra> {
    validate_algebra_with(spec, &Tolerances::default())
}

pub fn validate_algebra_with(spec: &AlgebraSpec, tol: &Tolerances) -> Result<GradedAlgebra> {
    let n = spec.ambient_dim;
    if n == 0 {
        return Err(Error::Shape("ambient_dim must be positive".into()));
    }
    let q = &spec.grading_unitary;
    if q.shape() != (n, n) {
        return Err(Error::Shape(format!("grading unitary is {:?}, expected {n}x{n}", q.shape())));
    }
    for (i, b) in spec.basis.iter().enumerate() {
        if b.shape() != (n, n) {
            return Err(Error::Shape(format!("basis[{i}] is {:?}, expected {n}x{n}", b.shape())));
        }
    }
    if spec.basis.is_empty() {
        return Err(Error::DegenerateBasis(0.0));
    }

    let q_res = frob_dist(q, &q.adjoint()).max(frob_dist(&(q * q), &identity(n)));
    if q_res > tol.tau_alg {
        return Err(Error::BadGradingUnitary(q_res));
    }

    let raw = linalg::columns(&spec.basis.iter().map(vectorize).collect::<Vec<_>>(), n * n);
    let smallest = if spec.basis.len() > n * n {
        0.0
    } else {
        linalg::singular_values(&raw).last().cloned().unwrap_or(0.0)
    };
    if smallest <= tol.tau_rank {
        return Err(Error::DegenerateBasis(smallest));
    }

    // Homogeneous re-basing: split each input through ε₁/ε₋₁ and keep an
    // independent subset of the parts, in input order.
    let mut candidates = Vec::new();
    for b in &spec.basis {
        let scale = b.norm().max(1.0);
        let flipped = q * b * q;
        let even = (b + &flipped).map(|z| z * 0.5);
        let odd = (b - &flipped).map(|z| z * 0.5);
        if even.norm() > tol.tau_alg * scale {
            candidates.push((even, Parity::Even));
        }
        if odd.norm() > tol.tau_alg * scale {
            candidates.push((odd, Parity::Odd));
        }
    }
    let vecs: Vec<CVector> = candidates.iter().map(|(m, _)| vectorize(m)).collect();
    let kept = independent_subset(&vecs, tol.tau_rank);
    if kept.len() > spec.basis.len() {
        return Err(Error::NotClosed("the grading automorphism".into()));
    }
    let (basis, parities): (Vec<CMatrix>, Vec<Parity>) =
        kept.into_iter().map(|k| candidates[k].clone()).unzip();

    let coordinates = left_inverse(&basis, n, tol.tau_rank);
    let d = basis.len();

    let id = identity(n);
    let (unit, unit_res) = solve_coords(&basis, &coordinates, &id);
    if unit_res > tol.tau_alg * (n as f64).sqrt() {
        return Err(Error::NotUnital(unit_res));
    }

    let mut product_rows = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let prod = &basis[i] * &basis[j];
            let (coeffs, res) = solve_coords(&basis, &coordinates, &prod);
            if res > tol.tau_alg * prod.norm().max(1.0) {
                return Err(Error::NotClosed(format!(
                    "multiplication (basis pair {i},{j}, residual {res:.3e})"
                )));
            }
            product_rows.push(coeffs);
        }
    }
    let mut involution_rows = Vec::with_capacity(d);
    for (i, b) in basis.iter().enumerate() {
        let adj = b.adjoint();
        let (coeffs, res) = solve_coords(&basis, &coordinates, &adj);
        if res > tol.tau_alg * adj.norm().max(1.0) {
            return Err(Error::NotClosed(format!("the involution (basis element {i}, residual {res:.3e})")));
        }
        involution_rows.push(coeffs);
    }

    Ok(GradedAlgebra {
        ambient_dim: n,
        basis,
        parities,
        grading: q.clone(),
        products: SparseTable::from_dense_rows(product_rows.iter().map(Vec::as_slice)),
        involution: SparseTable::from_dense_rows(involution_rows.iter().map(Vec::as_slice)),
        unit: clean(unit),
        coordinates,
        tol: *tol,
    })
}

fn clean(mut v: Vec<Complex64>) -> Vec<Complex64> {
    for z in v.iter_mut() {
        if z.norm() <= SPARSE_CUTOFF {
            *z = ZERO;
        }
    }
    v
}

/// Pseudo-inverse of the `n² × d` matrix of vectorized basis elements.
fn left_inverse(basis: &[CMatrix], n: usize, tau_rank: f64) -> CMatrix {
    let b = linalg::columns(&basis.iter().map(vectorize).collect::<Vec<_>>(), n * n);
    let top = linalg::operator_norm(&b);
    b.pseudo_inverse(tau_rank * top.max(1.0)).expect("pseudo-inverse with non-negative eps")
}

fn solve_coords(basis: &[CMatrix], coordinates: &CMatrix, m: &CMatrix) -> (Vec<Complex64>, f64) {
    let coeffs = coordinates * vectorize(m);
    let mut back = CMatrix::zeros(m.nrows(), m.ncols());
    for (c, b) in coeffs.iter().zip(basis) {
        if *c != ZERO {
            back += b * *c;
        }
    }
    (coeffs.iter().cloned().collect(), frob_dist(&back, m))
}

impl GradedAlgebra {
    /// Assembles an algebra from precomputed tables. The basis must be
    /// homogeneous and linearly independent; the tables are trusted.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        ambient_dim: usize,
        basis: Vec<CMatrix>,
        parities: Vec<Parity>,
        grading: CMatrix,
        products: SparseTable,
        involution: SparseTable,
        unit: Vec<Complex64>,
        tol: Tolerances,
    ) -> Self {
        let coordinates = left_inverse(&basis, ambient_dim, tol.tau_rank);
        GradedAlgebra { ambient_dim, basis, parities, grading, products, involution, unit, coordinates, tol }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Algebra dimension `d`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn grading_unitary(&self) -> &CMatrix {
        &self.grading
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Sparse `c_{ij·}` with `bᵢbⱼ = Σ_k c_{ijk} b_k`.
    pub fn product_row(&self, i: usize, j: usize) -> &[(usize, Complex64)] {
        self.products.row(i * self.dim() + j)
    }

    /// Sparse `s_{i·}` with `bᵢ* = Σ_k s_{ik} b_k`.
    pub fn involution_row(&self, i: usize) -> &[(usize, Complex64)] {
        self.involution.row(i)
    }

    pub fn products(&self) -> &SparseTable {
        &self.products
    }

    pub fn involution(&self) -> &SparseTable {
        &self.involution
    }

    /// Coordinates of the identity.
    pub fn unit(&self) -> &[Complex64] {
        &self.unit
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parities[i] == Parity::Even).collect()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parities[i] == Parity::Odd).collect()
    }

    pub fn is_trivially_graded(&self) -> bool {
        self.parities.iter().all(|&p| p == Parity::Even)
    }

    /// Coordinates of an ambient matrix, with the reconstruction residual.
    pub fn coordinates_of(&self, m: &CMatrix) -> (Vec<Complex64>, f64) {
        solve_coords(&self.basis, &self.coordinates, m)
    }

    pub fn matrix_of(&self, coeffs: &[Complex64]) -> CMatrix {
        let n = self.ambient_dim;
        let mut m = CMatrix::zeros(n, n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != ZERO {
                m += b * *c;
            }
        }
        m
    }

    /// Product in coordinates, through the structure constants.
    pub fn multiply_coeffs(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        let mut out = vec![ZERO; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == ZERO {
                    continue;
                }
                let w = xi * yj;
                for &(k, c) in self.product_row(i, j) {
                    out[k] += w * c;
                }
            }
        }
        out
    }

    /// Involution in coordinates (conjugate-linear).
    pub fn adjoint_coeffs(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for &(k, s) in self.involution_row(i) {
                out[k] += xi.conj() * s;
            }
        }
        out
    }

    pub fn theta_coeffs(&self, x: &[Complex64]) -> Vec<Complex64> {
        x.iter().zip(&self.parities).map(|(&c, p)| c * p.signf()).collect()
    }

    /// Matrix of left multiplication by `bᵢ` on coordinates: column `j`
    /// holds the coordinates of `bᵢbⱼ`.
    pub fn left_regular(&self, i: usize) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for j in 0..d {
            for &(k, c) in self.product_row(i, j) {
                m[(k, j)] += c;
            }
        }
        m
    }

    /// The same algebra with different numerical thresholds.
    pub fn with_tolerances(&self, tol: Tolerances) -> GradedAlgebra {
        let mut out = self.clone();
        out.coordinates = left_inverse(&self.basis, self.ambient_dim, tol.tau_rank);
        out.tol = tol;
        out
    }

    /// The same matrices with grading `Q = I`.
    pub fn with_trivial_grading(&self) -> GradedAlgebra {
        let mut out = self.clone();
        out.grading = identity(self.ambient_dim);
        out.parities = vec![Parity::Even; self.dim()];
        out
    }

    /// The even subalgebra, with its embedding into `self`.
    pub fn even_part(self: &Arc<Self>) -> EvenSubalgebra {
        let indices = self.even_indices();
        let mut pos = vec![usize::MAX; self.dim()];
        for (k, &i) in indices.iter().enumerate() {
            pos[i] = k;
        }
        let e = indices.len();
        let mut products = Vec::with_capacity(e * e);
        for &i in &indices {
            for &j in &indices {
                products.push(
                    self.product_row(i, j)
                        .iter()
                        .filter(|(k, _)| pos[*k] != usize::MAX)
                        .map(|&(k, c)| (pos[k], c))
                        .collect(),
                );
            }
        }
        let involution = indices
            .iter()
            .map(|&i| {
                self.involution_row(i)
                    .iter()
                    .filter(|(k, _)| pos[*k] != usize::MAX)
                    .map(|&(k, c)| (pos[k], c))
                    .collect()
            })
            .collect();
        let unit = indices.iter().map(|&i| self.unit[i]).collect();
        let algebra = GradedAlgebra::from_parts(
            self.ambient_dim,
            indices.iter().map(|&i| self.basis[i].clone()).collect(),
            vec![Parity::Even; e],
            identity(self.ambient_dim),
            SparseTable::new(products),
            SparseTable::new(involution),
            unit,
            self.tol,
        );
        EvenSubalgebra { parent: Arc::clone(self), algebra: Arc::new(algebra), indices }
    }

    /// Maximum residuals of θ being a *-automorphism on all basis pairs.
    pub fn theta_automorphism_residual(&self) -> f64 {
        let q = &self.grading;
        let th = |m: &CMatrix| q * m * q;
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            worst = worst.max(frob_dist(&th(&a.adjoint()), &th(a).adjoint()));
            worst = worst.max(frob_dist(&th(&th(a)), a));
            for b in &self.basis {
                worst = worst.max(frob_dist(&th(&(a * b)), &(th(a) * th(b))));
            }
        }
        worst
    }
}

/// `𝔄₊` as an algebra in its own right, remembering which basis elements of
/// the parent it came from.
#[derive(Clone, Debug)]
pub struct EvenSubalgebra {
    pub parent: Arc<GradedAlgebra>,
    pub algebra: Arc<GradedAlgebra>,
    /// `indices[k]` is the parent basis index of the k-th even basis element.
    pub indices: Vec<usize>,
}

/// An element of a graded algebra: ambient matrix plus basis coordinates.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    algebra: Arc<GradedAlgebra>,
    matrix: CMatrix,
    coeffs: Vec<Complex64>,
}

impl AlgebraElement {
    pub fn from_coeffs(algebra: &Arc<GradedAlgebra>, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), algebra.dim(), "coefficient vector has wrong length");
        let matrix = algebra.matrix_of(&coeffs);
        AlgebraElement { algebra: Arc::clone(algebra), matrix, coeffs }
    }

    pub fn from_matrix(algebra: &Arc<GradedAlgebra>, matrix: CMatrix) -> Result<Self> {
        let n = algebra.ambient_dim();
        if matrix.shape() != (n, n) {
            return Err(Error::Shape(format!("element is {:?}, expected {n}x{n}", matrix.shape())));
        }
        let (coeffs, res) = algebra.coordinates_of(&matrix);
        if res > algebra.tol.tau_alg * matrix.norm().max(1.0) {
            return Err(Error::NotInAlgebra(res));
        }
        Ok(AlgebraElement { algebra: Arc::clone(algebra), matrix, coeffs })
    }

    pub fn basis(algebra: &Arc<GradedAlgebra>, i: usize) -> Self {
        let mut coeffs = vec![ZERO; algebra.dim()];
        coeffs[i] = ONE;
        AlgebraElement { algebra: Arc::clone(algebra), matrix: algebra.basis[i].clone(), coeffs }
    }

    pub fn identity(algebra: &Arc<GradedAlgebra>) -> Self {
        AlgebraElement::from_coeffs(algebra, algebra.unit.clone())
    }

    pub fn zero(algebra: &Arc<GradedAlgebra>) -> Self {
        AlgebraElement::from_coeffs(algebra, vec![ZERO; algebra.dim()])
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn with_matrix(&self, matrix: CMatrix, coeffs: Vec<Complex64>) -> Self {
        AlgebraElement { algebra: Arc::clone(&self.algebra), matrix, coeffs }
    }

    /// `θ(a) = QaQ`.
    pub fn theta(&self) -> Self {
        let q = &self.algebra.grading;
        self.with_matrix(q * &self.matrix * q, self.algebra.theta_coeffs(&self.coeffs))
    }

    /// `ε₁(a) = ½(a + θ(a))`, the even part.
    pub fn eps_even(&self) -> Self {
        self.split(Parity::Even)
    }

    /// `ε₋₁(a) = ½(a - θ(a))`, the odd part.
    pub fn eps_odd(&self) -> Self {
        self.split(Parity::Odd)
    }

    fn split(&self, keep: Parity) -> Self {
        let coeffs: Vec<Complex64> = self
            .coeffs
            .iter()
            .zip(self.algebra.parities())
            .map(|(&c, &p)| if p == keep { c } else { ZERO })
            .collect();
        let q = &self.algebra.grading;
        let flipped = q * &self.matrix * q;
        let matrix = match keep {
            Parity::Even => (&self.matrix + flipped).map(|z| z * 0.5),
            Parity::Odd => (&self.matrix - flipped).map(|z| z * 0.5),
        };
        self.with_matrix(matrix, coeffs)
    }

    pub fn grade(&self) -> Grade {
        let tol = self.algebra.tol.tau_alg * self.matrix.norm().max(1.0);
        let flipped = self.theta();
        if frob_dist(&flipped.matrix, &self.matrix) <= tol {
            Grade::Even
        } else if (&flipped.matrix + &self.matrix).norm() <= tol {
            Grade::Odd
        } else {
            Grade::Mixed
        }
    }

    pub fn adjoint(&self) -> Self {
        self.with_matrix(self.matrix.adjoint(), self.algebra.adjoint_coeffs(&self.coeffs))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.with_matrix(self.matrix.map(|z| z * s), self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Operator norm of the ambient matrix.
    pub fn norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }

    pub fn distance(&self, other: &AlgebraElement) -> f64 {
        frob_dist(&self.matrix, &other.matrix)
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let coeffs = self.algebra.multiply_coeffs(&self.coeffs, &rhs.coeffs);
        self.with_matrix(&self.matrix * &rhs.matrix, coeffs)
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        self.with_matrix(&self.matrix + &rhs.matrix, coeffs)
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        self.with_matrix(&self.matrix - &rhs.matrix, coeffs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(c64(-1.0, 0.0))
    }
}

/// Free-function form of `a.theta()`.
pub fn theta(a: &AlgebraElement) -> AlgebraElement {
    a.theta()
}

pub fn eps_even(a: &AlgebraElement) -> AlgebraElement {
    a.eps_even()
}

pub fn eps_odd(a: &AlgebraElement) -> AlgebraElement {
    a.eps_odd()
}

pub fn grade(a: &AlgebraElement) -> Grade {
    a.grade()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_x, pauli_y, pauli_z};

    fn m2_graded() -> Arc<GradedAlgebra> {
        let spec = AlgebraSpec {
            ambient_dim: 2,
            basis: vec![identity(2), pauli_z(), pauli_x(), pauli_y()],
            grading_unitary: pauli_z(),
        };
        Arc::new(validate_algebra(&spec).unwrap())
    }

    fn elem(a: &Arc<GradedAlgebra>, m: CMatrix) -> AlgebraElement {
        AlgebraElement::from_matrix(a, m).unwrap()
    }

    #[test]
    fn m2_with_sigma_z_grading_has_pauli_basis() {
        let a = m2_graded();
        assert_eq!(a.dim(), 4);
        assert_eq!(a.parities(), &[Parity::Even, Parity::Even, Parity::Odd, Parity::Odd]);
        assert!(frob_dist(&a.basis()[2], &pauli_x()) < 1e-15);
    }

    #[test]
    fn diagonal_algebra_with_trivial_grading() {
        let e11 = linalg::real_matrix(2, &[1.0, 0.0, 0.0, 0.0]);
        let e22 = linalg::real_matrix(2, &[0.0, 0.0, 0.0, 1.0]);
        let spec = AlgebraSpec { ambient_dim: 2, basis: vec![e11, e22], grading_unitary: identity(2) };
        let a = validate_algebra(&spec).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.odd_indices().is_empty());
    }

    #[test]
    fn missing_identity_is_rejected() {
        let spec = AlgebraSpec { ambient_dim: 2, basis: vec![pauli_x()], grading_unitary: pauli_z() };
        assert!(matches!(validate_algebra(&spec), Err(Error::NotUnital(_))));
    }

    #[test]
    fn non_closed_span_is_rejected() {
        let spec = AlgebraSpec {
            ambient_dim: 2,
            basis: vec![identity(2), pauli_x()],
            grading_unitary: pauli_z(),
        };
        // σ_zσ_x = iσ_y leaves span{I, σ_x, σ_z}
        assert!(validate_algebra(&spec).is_ok());

        let spec = AlgebraSpec {
            ambient_dim: 2,
            basis: vec![identity(2), pauli_x(), pauli_z()],
            grading_unitary: pauli_z(),
        };
        assert!(matches!(validate_algebra(&spec), Err(Error::NotClosed(_))));
    }

    #[test]
    fn span_not_invariant_under_grading_is_rejected() {
        let spec = AlgebraSpec {
            ambient_dim: 2,
            basis: vec![identity(2), &pauli_x() + &pauli_z()],
            grading_unitary: pauli_z(),
        };
        assert!(matches!(validate_algebra(&spec), Err(Error::NotClosed(_))));
    }

    #[test]
    fn degenerate_and_bad_grading_inputs() {
        let spec = AlgebraSpec {
            ambient_dim: 2,
            basis: vec![identity(2), identity(2)],
            grading_unitary: pauli_z(),
        };
        assert!(matches!(validate_algebra(&spec), Err(Error::DegenerateBasis(_))));
        let spec = AlgebraSpec {
            ambient_dim: 2,
            basis: vec![identity(2)],
            grading_unitary: pauli_x() * c64(2.0, 0.0),
        };
        assert!(matches!(validate_algebra(&spec), Err(Error::BadGradingUnitary(_))));
        let spec = AlgebraSpec {
            ambient_dim: 2,
            basis: vec![identity(2)],
            grading_unitary: pauli_y() * crate::linalg::I,
        };
        assert!(matches!(validate_algebra(&spec), Err(Error::BadGradingUnitary(_))));
    }

    #[test]
    fn mixed_input_basis_is_split_into_homogeneous_parts() {
        let spec = AlgebraSpec {
            ambient_dim: 2,
            basis: vec![identity(2), &pauli_x() + &pauli_z(), &pauli_x() - &pauli_z(), pauli_y()],
            grading_unitary: pauli_z(),
        };
        let a = validate_algebra(&spec).unwrap();
        assert_eq!(a.dim(), 4);
        for (b, p) in a.basis().iter().zip(a.parities()) {
            let flipped = pauli_z() * b * pauli_z();
            assert!(frob_dist(&flipped, &(b * c64(p.signf(), 0.0))) < 1e-12);
        }
    }

    #[test]
    fn theta_examples() {
        let a = m2_graded();
        let sx = elem(&a, pauli_x());
        assert!(frob_dist(sx.theta().matrix(), &(-pauli_x())) < 1e-15);
        assert!(frob_dist(AlgebraElement::identity(&a).theta().matrix(), &identity(2)) < 1e-15);
        let sz = elem(&a, pauli_z());
        assert!(frob_dist(sz.theta().matrix(), &pauli_z()) < 1e-15);
        assert!(sx.theta().theta().distance(&sx) < 1e-15);
    }

    #[test]
    fn even_odd_split_examples() {
        let a = m2_graded();
        let x = elem(&a, &pauli_x() + &pauli_z());
        assert!(frob_dist(x.eps_even().matrix(), &pauli_z()) < 1e-15);
        assert!(frob_dist(x.eps_odd().matrix(), &pauli_x()) < 1e-15);
        assert!((&x.eps_even() + &x.eps_odd()).distance(&x) < 1e-15);
        assert!(x.eps_even().eps_even().distance(&x.eps_even()) < 1e-15);

        let t = Arc::new(a.with_trivial_grading());
        let y = elem(&t, &pauli_x() + &pauli_z());
        assert!(y.eps_even().distance(&y) < 1e-15);
        assert!(y.eps_odd().matrix().norm() < 1e-15);
    }

    #[test]
    fn grade_examples() {
        let a = m2_graded();
        assert_eq!(elem(&a, pauli_y()).grade(), Grade::Odd);
        assert_eq!(AlgebraElement::identity(&a).grade(), Grade::Even);
        assert_eq!(elem(&a, &identity(2) + &pauli_x()).grade(), Grade::Mixed);
    }

    #[test]
    fn koszul_signs() {
        assert_eq!(sign_eps(Grade::Odd, Grade::Odd).unwrap(), -1);
        assert_eq!(sign_eps(Grade::Even, Grade::Odd).unwrap(), 1);
        assert_eq!(sign_eps(Grade::Even, Grade::Even).unwrap(), 1);
        assert!(matches!(sign_eps(Grade::Mixed, Grade::Even), Err(Error::MixedGrade)));
        assert_eq!(sign_eps_tilde(Parity::Odd, Parity::Odd), -1);
        assert_eq!(sign_eps_tilde(Parity::Odd, Parity::Even), 1);
    }

    #[test]
    fn structure_constants_reproduce_products() {
        let a = m2_graded();
        for i in 0..4 {
            for j in 0..4 {
                let lhs = &a.basis()[i] * &a.basis()[j];
                let mut coeffs = vec![ZERO; 4];
                for &(k, c) in a.product_row(i, j) {
                    coeffs[k] = c;
                }
                assert!(frob_dist(&a.matrix_of(&coeffs), &lhs) < 1e-12);
            }
        }
        assert!(a.theta_automorphism_residual() < 1e-12);
    }

    #[test]
    fn even_part_of_m2_is_diagonal() {
        let a = m2_graded();
        let e = a.even_part();
        assert_eq!(e.indices, vec![0, 1]);
        assert_eq!(e.algebra.dim(), 2);
        assert!(e.algebra.is_trivially_graded());
    }
}
