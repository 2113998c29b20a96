//! The Fermi (Z₂-graded) tensor product `𝔄₁ ⊛ 𝔄₂`.
//!
//! As a vector space this is `𝔄₁ ⊗ 𝔄₂` with basis `bᵢ ⊗ cⱼ` (index
//! `i·d₂ + j`). On homogeneous simple tensors
//!
//! ```text
//! (a₁⊗a₂)(b₁⊗b₂) = ε̃(∂a₂, ∂b₁) a₁b₁ ⊗ a₂b₂
//! (a₁⊗a₂)*       = ε̃(∂a₁, ∂a₂) a₁* ⊗ a₂*
//! ```
//!
//! The tables are built from these rules alone. The Klein realization
//! `a₁⊗a₂ ↦ a₁Q₁^p ⊗ a₂` (`p = 1` iff `a₂` is odd) is kept alongside as the
//! concrete matrix model and is checked against the tables, not used to
//! derive them.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::algebra::{sign_eps_tilde, AlgebraElement, GradedAlgebra, Parity, SparseTable};
use crate::error::{Error, Result};
use crate::gns::Representation;
use crate::linalg::{self, frob_dist, kron, CMatrix, ZERO};
use crate::report::VerificationReport;

pub struct FermiAlgebra {
    left: Arc<GradedAlgebra>,
    right: Arc<GradedAlgebra>,
    /// The product as a graded algebra: signed tables, Klein matrices as
    /// basis, grading unitary `Q₁⊗Q₂`.
    product: Arc<GradedAlgebra>,
    reference_rep: OnceLock<Representation>,
}

impl std::fmt::Debug for FermiAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FermiAlgebra")
            .field("left", &self.left)
            .field("right", &self.right)
            .finish()
    }
}

/// Klein matrix of a homogeneous simple tensor.
pub fn klein_matrix(a1: &CMatrix, q1: &CMatrix, right_parity: Parity, a2: &CMatrix) -> CMatrix {
    match right_parity {
        Parity::Even => kron(a1, a2),
        Parity::Odd => kron(&(a1 * q1), a2),
    }
}

pub fn build_fermi_product(a1: &Arc<GradedAlgebra>, a2: &Arc<GradedAlgebra>) -> Arc<FermiAlgebra> {
    let (d1, d2) = (a1.dim(), a2.dim());
    let d = d1 * d2;
    let idx = |i: usize, j: usize| i * d2 + j;

    let mut products = Vec::with_capacity(d * d);
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d1 {
                for l in 0..d2 {
                    let sign = sign_eps_tilde(a2.parity(j), a1.parity(k)) as f64;
                    let mut row = Vec::new();
                    for &(m, alpha) in a1.product_row(i, k) {
                        for &(n, beta) in a2.product_row(j, l) {
                            row.push((idx(m, n), alpha * beta * sign));
                        }
                    }
                    products.push(row);
                }
            }
        }
    }
    // products were pushed in (i, j, k, l) order, which is row-major in
    // (idx(i,j), idx(k,l)) as required
    let mut involution = Vec::with_capacity(d);
    let mut basis = Vec::with_capacity(d);
    let mut parities = Vec::with_capacity(d);
    let mut unit = vec![ZERO; d];
    for i in 0..d1 {
        for j in 0..d2 {
            let sign = sign_eps_tilde(a1.parity(i), a2.parity(j)) as f64;
            let mut row = Vec::new();
            for &(m, s1) in a1.involution_row(i) {
                for &(n, s2) in a2.involution_row(j) {
                    row.push((idx(m, n), s1 * s2 * sign));
                }
            }
            involution.push(row);
            basis.push(klein_matrix(
                &a1.basis()[i],
                a1.grading_unitary(),
                a2.parity(j),
                &a2.basis()[j],
            ));
            parities.push(a1.parity(i).compose(a2.parity(j)));
            unit[idx(i, j)] = a1.unit()[i] * a2.unit()[j];
        }
    }
    let product = GradedAlgebra::from_parts(
        a1.ambient_dim() * a2.ambient_dim(),
        basis,
        parities,
        kron(a1.grading_unitary(), a2.grading_unitary()),
        SparseTable::new(products),
        SparseTable::new(involution),
        unit,
        *a1.tolerances(),
    );
    Arc::new(FermiAlgebra {
        left: Arc::clone(a1),
        right: Arc::clone(a2),
        product: Arc::new(product),
        reference_rep: OnceLock::new(),
    })
}

/// The ordinary (ungraded) tensor product, built as the Fermi product of
/// the trivially regraded factors.
pub fn build_ungraded_product(a1: &Arc<GradedAlgebra>, a2: &Arc<GradedAlgebra>) -> Arc<FermiAlgebra> {
    build_fermi_product(&Arc::new(a1.with_trivial_grading()), &Arc::new(a2.with_trivial_grading()))
}

impl FermiAlgebra {
    pub fn left(&self) -> &Arc<GradedAlgebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<GradedAlgebra> {
        &self.right
    }

    /// The product viewed as a graded algebra (Klein matrices, grading
    /// `Q₁⊗Q₂`). This is what makes `(𝔄⊛𝔅)⊛ℭ` possible.
    pub fn as_graded(&self) -> &Arc<GradedAlgebra> {
        &self.product
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.right.dim() + j
    }

    /// Inverse of [`FermiAlgebra::index`].
    pub fn legs(&self, k: usize) -> (usize, usize) {
        (k / self.right.dim(), k % self.right.dim())
    }

    pub fn klein_basis(&self) -> &[CMatrix] {
        self.product.basis()
    }

    pub fn parity(&self, k: usize) -> Parity {
        self.product.parity(k)
    }

    pub fn label(&self, k: usize) -> String {
        let (i, j) = self.legs(k);
        format!("b{i}⊗c{j}")
    }

    /// Copy with the product table entry for basis pair `(x, y)` negated.
    /// Negative-control fixture for [`verify_klein_isomorphism`].
    pub fn with_corrupted_sign(&self, x: usize, y: usize) -> Arc<FermiAlgebra> {
        let mut products = self.product.products().clone();
        for entry in products.row_mut(x * self.dim() + y) {
            entry.1 = -entry.1;
        }
        let product = GradedAlgebra::from_parts(
            self.product.ambient_dim(),
            self.product.basis().to_vec(),
            self.product.parities().to_vec(),
            self.product.grading_unitary().clone(),
            products,
            self.product.involution().clone(),
            self.product.unit().to_vec(),
            *self.product.tolerances(),
        );
        Arc::new(FermiAlgebra {
            left: Arc::clone(&self.left),
            right: Arc::clone(&self.right),
            product: Arc::new(product),
            reference_rep: OnceLock::new(),
        })
    }

    /// Lazily built reference faithful representation used by `min_norm`.
    pub(crate) fn reference_rep_cell(&self) -> &OnceLock<Representation> {
        &self.reference_rep
    }
}

/// An element of a Fermi product, stored by coordinates.
#[derive(Clone, Debug)]
pub struct FermiElement {
    parent: Arc<FermiAlgebra>,
    coeffs: Vec<Complex64>,
}

impl FermiElement {
    pub fn new(parent: &Arc<FermiAlgebra>, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), parent.dim(), "coefficient vector has wrong length");
        FermiElement { parent: Arc::clone(parent), coeffs }
    }

    pub fn zero(parent: &Arc<FermiAlgebra>) -> Self {
        FermiElement::new(parent, vec![ZERO; parent.dim()])
    }

    pub fn identity(parent: &Arc<FermiAlgebra>) -> Self {
        FermiElement::new(parent, parent.product.unit().to_vec())
    }

    pub fn basis(parent: &Arc<FermiAlgebra>, i: usize, j: usize) -> Self {
        let mut coeffs = vec![ZERO; parent.dim()];
        coeffs[parent.index(i, j)] = linalg::ONE;
        FermiElement::new(parent, coeffs)
    }

    /// `a ⊛ b`. Mixed-grade legs are handled by bilinearity over the
    /// homogeneous basis, so signs only ever touch homogeneous pieces.
    pub fn simple(parent: &Arc<FermiAlgebra>, a: &AlgebraElement, b: &AlgebraElement) -> Result<Self> {
        if a.coeffs().len() != parent.left.dim() || b.coeffs().len() != parent.right.dim() {
            return Err(Error::Shape("legs do not belong to the factors".into()));
        }
        let mut coeffs = Vec::with_capacity(parent.dim());
        for &x in a.coeffs() {
            for &y in b.coeffs() {
                coeffs.push(x * y);
            }
        }
        Ok(FermiElement::new(parent, coeffs))
    }

    pub fn parent(&self) -> &Arc<FermiAlgebra> {
        &self.parent
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn same(&self, coeffs: Vec<Complex64>) -> Self {
        FermiElement { parent: Arc::clone(&self.parent), coeffs }
    }

    pub fn mul(&self, other: &FermiElement) -> Self {
        self.same(self.parent.product.multiply_coeffs(&self.coeffs, &other.coeffs))
    }

    pub fn add(&self, other: &FermiElement) -> Self {
        self.same(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &FermiElement) -> Self {
        self.same(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.same(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Signed involution.
    pub fn adjoint(&self) -> Self {
        self.same(self.parent.product.adjoint_coeffs(&self.coeffs))
    }

    /// `(θ₁⊛θ₂)(x)`.
    pub fn grading(&self) -> Self {
        self.same(self.parent.product.theta_coeffs(&self.coeffs))
    }

    pub fn klein_realize(&self) -> CMatrix {
        self.parent.product.matrix_of(&self.coeffs)
    }

    /// Max-abs coefficient distance.
    pub fn distance(&self, other: &FermiElement) -> f64 {
        linalg::max_abs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()))
    }

    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// The `(i, j)` grade component `x_{i,j}` of `x = ⊕ x_{i,j}`.
    pub fn component(&self, left: Parity, right: Parity) -> Self {
        let coeffs = (0..self.coeffs.len())
            .map(|k| {
                let (i, j) = self.parent.legs(k);
                if self.parent.left.parity(i) == left && self.parent.right.parity(j) == right {
                    self.coeffs[k]
                } else {
                    ZERO
                }
            })
            .collect();
        self.same(coeffs)
    }

    /// The element of the product viewed as a graded algebra.
    pub fn as_algebra_element(&self) -> AlgebraElement {
        AlgebraElement::from_coeffs(&self.parent.product, self.coeffs.clone())
    }
}

pub fn fermi_involution(x: &FermiElement) -> FermiElement {
    x.adjoint()
}

pub fn fermi_grading(x: &FermiElement) -> FermiElement {
    x.grading()
}

pub fn klein_realize(x: &FermiElement) -> CMatrix {
    x.klein_realize()
}

/// Checks that the Klein map reproduces the signed tables on every basis
/// pair, preserves the involution, and is injective.
pub fn verify_klein_isomorphism(f: &FermiAlgebra) -> VerificationReport {
    let tol = f.product.tolerances().tau_alg;
    let k = f.klein_basis();
    let d = f.dim();
    let mut worst = 0.0f64;
    let mut worst_pair: Option<(usize, usize)> = None;
    let mut violations: Vec<String> = Vec::new();
    for x in 0..d {
        for y in 0..d {
            let mut expected = CMatrix::zeros(k[0].nrows(), k[0].ncols());
            for &(z, c) in f.product.product_row(x, y) {
                expected += &k[z] * c;
            }
            let res = frob_dist(&(&k[x] * &k[y]), &expected);
            if res > worst {
                worst = res;
                worst_pair = Some((x, y));
            }
            if res > tol {
                violations.push(format!("product {} · {}", f.label(x), f.label(y)));
            }
        }
    }
    let mut star_worst = 0.0f64;
    for x in 0..d {
        let mut expected = CMatrix::zeros(k[0].nrows(), k[0].ncols());
        for &(z, s) in f.product.involution_row(x) {
            expected += &k[z] * s;
        }
        let res = frob_dist(&k[x].adjoint(), &expected);
        star_worst = star_worst.max(res);
        if res > tol {
            violations.push(format!("involution of {}", f.label(x)));
        }
    }
    let stacked = linalg::columns(&k.iter().map(linalg::vectorize).collect::<Vec<_>>(), k[0].len());
    let rank = linalg::rank(&stacked, f.product.tolerances().tau_rank);
    let max_res = worst.max(star_worst);
    let mut report = VerificationReport::from_residual("klein_isomorphism", max_res, tol)
        .with("product_residual", worst)
        .with("involution_residual", star_worst)
        .with("rank", rank as u64)
        .with("dim", d as u64);
    if let Some((x, y)) = worst_pair {
        report = report.with("worst_pair", format!("{} · {}", f.label(x), f.label(y)));
    }
    if !violations.is_empty() {
        violations.truncate(16);
        report = report.fail_with("violations", violations);
    }
    if rank != d {
        report = report.fail_with("injective", false);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{validate_algebra, AlgebraSpec};
    use crate::linalg::{c64, identity, pauli_x, pauli_y, pauli_z, I, ONE};

    fn m2() -> Arc<GradedAlgebra> {
        let spec = AlgebraSpec {
            ambient_dim: 2,
            basis: vec![identity(2), pauli_z(), pauli_x(), pauli_y()],
            grading_unitary: pauli_z(),
        };
        Arc::new(validate_algebra(&spec).unwrap())
    }

    // basis order of m2(): 0 = I, 1 = σz, 2 = σx, 3 = σy
    const ID: usize = 0;
    const SZ: usize = 1;
    const SX: usize = 2;
    const SY: usize = 3;

    #[test]
    fn odd_odd_square_picks_up_sign() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let xx = FermiElement::basis(&f, SX, SX);
        let sq = xx.mul(&xx);
        let expected = FermiElement::basis(&f, ID, ID).scale(c64(-1.0, 0.0));
        assert!(sq.distance(&expected) < 1e-14);
    }

    #[test]
    fn odd_legs_anticommute() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let x1 = FermiElement::basis(&f, SX, ID);
        let x2 = FermiElement::basis(&f, ID, SX);
        let xx = FermiElement::basis(&f, SX, SX);
        assert!(x1.mul(&x2).distance(&xx) < 1e-14);
        assert!(x2.mul(&x1).distance(&xx.scale(c64(-1.0, 0.0))) < 1e-14);
        // with an even leg they commute
        let z1 = FermiElement::basis(&f, SZ, ID);
        assert!(z1.mul(&x2).distance(&x2.mul(&z1)) < 1e-14);
    }

    #[test]
    fn trivial_gradings_give_ordinary_tensor_product() {
        let a = Arc::new(m2().with_trivial_grading());
        let f = build_fermi_product(&a, &a);
        for x in 0..f.dim() {
            for y in 0..f.dim() {
                let (i, j) = f.legs(x);
                let (k, l) = f.legs(y);
                let lhs = FermiElement::basis(&f, i, j).mul(&FermiElement::basis(&f, k, l)).klein_realize();
                let rhs = kron(&(&a.basis()[i] * &a.basis()[k]), &(&a.basis()[j] * &a.basis()[l]));
                assert!(frob_dist(&lhs, &rhs) < 1e-13);
            }
        }
    }

    #[test]
    fn involution_examples() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let xy = FermiElement::basis(&f, SX, SY);
        assert!(xy.adjoint().distance(&xy.scale(c64(-1.0, 0.0))) < 1e-14);
        let one = FermiElement::identity(&f);
        assert!(one.adjoint().distance(&one) < 1e-14);
        let zx = FermiElement::basis(&f, SZ, SX);
        assert!(zx.adjoint().distance(&zx) < 1e-14);
        // conjugate linearity
        let w = xy.scale(I);
        assert!(w.adjoint().distance(&xy.adjoint().scale(-I)) < 1e-14);
    }

    #[test]
    fn grading_examples() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let x1 = FermiElement::basis(&f, SX, ID);
        assert!(x1.grading().distance(&x1.scale(c64(-1.0, 0.0))) < 1e-15);
        let xy = FermiElement::basis(&f, SX, SY);
        assert!(xy.grading().distance(&xy) < 1e-15);
        let one = FermiElement::identity(&f);
        assert!(one.grading().distance(&one) < 1e-15);
    }

    #[test]
    fn klein_realization_examples() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let k = |i, j| FermiElement::basis(&f, i, j).klein_realize();
        assert!(frob_dist(&k(SX, SX), &kron(&(pauli_x() * pauli_z()), &pauli_x())) < 1e-15);
        assert!(frob_dist(&k(SX, ID), &kron(&pauli_x(), &identity(2))) < 1e-15);
        assert!(frob_dist(&k(ID, SX), &kron(&pauli_z(), &pauli_x())) < 1e-15);
    }

    /// Brute-force action of `T₁ ⊙ T₂` on product basis vectors `e_a ⊗ e_b`:
    /// `(T₁⊙T₂)(ξ⊗η) = ε(T₂, ξ) T₁ξ ⊗ T₂η` for homogeneous ξ.
    fn brute_force_operator(t1: &CMatrix, q1: &CMatrix, t2_parity: Parity, t2: &CMatrix) -> CMatrix {
        let (n1, n2) = (t1.nrows(), t2.nrows());
        let mut out = CMatrix::zeros(n1 * n2, n1 * n2);
        for a in 0..n1 {
            // e_a is homogeneous because q1 is diagonal in these tests
            let xi_parity = if q1[(a, a)].re > 0.0 { Parity::Even } else { Parity::Odd };
            let sign = sign_eps_tilde(t2_parity, xi_parity) as f64;
            for b in 0..n2 {
                let col = a * n2 + b;
                for r1 in 0..n1 {
                    for r2 in 0..n2 {
                        out[(r1 * n2 + r2, col)] = t1[(r1, a)] * t2[(r2, b)] * sign;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn klein_matches_operator_product_on_basis_vectors() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        for x in 0..f.dim() {
            let (i, j) = f.legs(x);
            let brute = brute_force_operator(&a.basis()[i], &pauli_z(), a.parity(j), &a.basis()[j]);
            assert!(frob_dist(&brute, &f.klein_basis()[x]) < 1e-15, "{}", f.label(x));
        }
    }

    #[test]
    fn klein_isomorphism_report() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let r = verify_klein_isomorphism(&f);
        assert!(r.pass, "{r:?}");
        assert!(r.max_residual < 1e-12);

        let t = Arc::new(a.with_trivial_grading());
        assert!(verify_klein_isomorphism(&build_fermi_product(&t, &t)).pass);

        let bad = f.with_corrupted_sign(f.index(SX, ID), f.index(ID, SX));
        let r = verify_klein_isomorphism(&bad);
        assert!(!r.pass);
        let text = serde_json::to_string(&r.details).unwrap();
        assert!(text.contains("b2⊗c0 · b0⊗c2"), "{text}");
    }

    #[test]
    fn components_partition_the_element() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let coeffs: Vec<Complex64> = (0..16).map(|k| c64(k as f64, 1.0)).collect();
        let x = FermiElement::new(&f, coeffs);
        let mut sum = FermiElement::zero(&f);
        for p in [Parity::Even, Parity::Odd] {
            for q in [Parity::Even, Parity::Odd] {
                sum = sum.add(&x.component(p, q));
            }
        }
        assert!(sum.distance(&x) == 0.0);
        let _ = ONE;
    }
}
