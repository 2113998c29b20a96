//! Covariant GNS construction, graded Hilbert spaces and the Fermi product
//! of representations.
//!
//! Inner products are conjugate-linear in the first slot.

use num_complex::Complex64;

use crate::algebra::{Grade, GradedAlgebra};
use crate::error::{Error, Result};
use crate::fermi::{klein_matrix, FermiAlgebra};
use crate::linalg::{self, frob_dist, hermitian_eigen, identity, CMatrix, CVector, ZERO};
use crate::report::VerificationReport;
use crate::states::{check_state, is_even, product_functional, StateFunctional};

/// A Hilbert space `ℂⁿ` with a self-adjoint unitary grading `U`.
#[derive(Clone, Debug)]
pub struct GradedHilbertSpace {
    grading: CMatrix,
}

impl GradedHilbertSpace {
    pub fn new(grading: CMatrix) -> Result<Self> {
        let n = grading.nrows();
        if grading.ncols() != n {
            return Err(Error::Shape("grading must be square".into()));
        }
        let res = frob_dist(&grading, &grading.adjoint()).max(frob_dist(&(&grading * &grading), &identity(n)));
        if res > 1e-9 {
            return Err(Error::BadGradingUnitary(res));
        }
        Ok(GradedHilbertSpace { grading })
    }

    pub fn dim(&self) -> usize {
        self.grading.nrows()
    }

    pub fn grading(&self) -> &CMatrix {
        &self.grading
    }

    /// Orthogonal projection onto `H₊ = Ker(I - U)`.
    pub fn even_projection(&self) -> CMatrix {
        (identity(self.dim()) + &self.grading).map(|z| z * 0.5)
    }

    pub fn odd_projection(&self) -> CMatrix {
        (identity(self.dim()) - &self.grading).map(|z| z * 0.5)
    }

    /// Grade of a vector: `Uξ = ±ξ` up to `1e-9‖ξ‖`.
    pub fn grade_of_vector(&self, xi: &CVector) -> Grade {
        let tol = 1e-9 * xi.norm().max(1.0);
        let u = &self.grading * xi;
        if (&u - xi).norm() <= tol {
            Grade::Even
        } else if (&u + xi).norm() <= tol {
            Grade::Odd
        } else {
            Grade::Mixed
        }
    }

    /// Grade of an operator under `Ad_U`.
    pub fn grade_of_operator(&self, t: &CMatrix) -> Grade {
        let tol = 1e-9 * t.norm().max(1.0);
        let flipped = &self.grading * t * &self.grading;
        if frob_dist(&flipped, t) <= tol {
            Grade::Even
        } else if (&flipped + t).norm() <= tol {
            Grade::Odd
        } else {
            Grade::Mixed
        }
    }
}

pub fn grade_of_vector(h: &GradedHilbertSpace, xi: &CVector) -> Grade {
    h.grade_of_vector(xi)
}

/// Checks `∂(Tξ) = ∂(T)∂(ξ)` for homogeneous `T` and `ξ`.
pub fn graded_action_check(h: &GradedHilbertSpace, t: &CMatrix, xi: &CVector) -> Result<VerificationReport> {
    let pt = h.grade_of_operator(t).parity().ok_or(Error::MixedGrade)?;
    let px = h.grade_of_vector(xi).parity().ok_or(Error::MixedGrade)?;
    let expected = pt.compose(px);
    let image = t * xi;
    let sign = expected.signf();
    let res = (&h.grading * &image - &image * Complex64::new(sign, 0.0)).norm();
    Ok(VerificationReport::from_residual("graded_action", res, 1e-9 * image.norm().max(1.0))
        .with("operator_grade", pt.sign())
        .with("vector_grade", px.sign())
        .with("image_grade", expected.sign()))
}

/// A representation of an algebra given by the images of its basis.
#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    images: Vec<CMatrix>,
}

impl Representation {
    pub fn new(dim: usize, images: Vec<CMatrix>) -> Self {
        Representation { dim, images }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn apply(&self, coeffs: &[Complex64]) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (c, img) in coeffs.iter().zip(&self.images) {
            if *c != ZERO {
                m += img * *c;
            }
        }
        m
    }

    /// Residual of being a unital *-homomorphism on the structure constants.
    pub fn star_hom_residual(&self, algebra: &GradedAlgebra) -> f64 {
        let d = algebra.dim();
        let mut worst = frob_dist(&self.apply(algebra.unit()), &identity(self.dim));
        for i in 0..d {
            let mut adj = CMatrix::zeros(self.dim, self.dim);
            for &(k, s) in algebra.involution_row(i) {
                adj += &self.images[k] * s;
            }
            worst = worst.max(frob_dist(&self.images[i].adjoint(), &adj));
            for j in 0..d {
                let mut prod = CMatrix::zeros(self.dim, self.dim);
                for &(k, c) in algebra.product_row(i, j) {
                    prod += &self.images[k] * c;
                }
                worst = worst.max(frob_dist(&(&self.images[i] * &self.images[j]), &prod));
            }
        }
        worst
    }

    /// Rank of the stacked vectorized images.
    pub fn image_rank(&self) -> usize {
        if self.images.is_empty() {
            return 0;
        }
        let stacked = linalg::columns(&self.images.iter().map(linalg::vectorize).collect::<Vec<_>>(), self.dim * self.dim);
        linalg::rank(&stacked, 1e-10)
    }
}

/// Trivial kernel: the images are linearly independent.
pub fn faithfulness_check(rep: &Representation, algebra: &GradedAlgebra) -> bool {
    rep.images.len() == algebra.dim() && rep.image_rank() == algebra.dim()
}

/// Explicit GNS data `(H_ω, π_ω, ξ_ω, V_{θ,ω})`.
#[derive(Clone, Debug)]
pub struct GnsData {
    state: StateFunctional,
    rep: Representation,
    cyclic: CVector,
    grading_op: Option<CMatrix>,
    /// `J : ℂ^d → H_ω`, coordinates of `a` to the class `[a]`.
    embedding: CMatrix,
}

/// GNS construction from the Gram matrix.
///
/// With `M = W Λ W*` restricted to eigenvalues above `1e-10·λ_max`, the map
/// `J = Λ^{1/2} W*` sends coordinates to `H_ω = ℂ^r` isometrically for the
/// Gram form. Left multiplication descends through `J` because the null
/// space is a left ideal, and so does θ when ω is even.
pub fn gns(omega: &StateFunctional) -> Result<GnsData> {
    check_state(omega)?;
    let algebra = omega.algebra();
    let tol = algebra.tolerances();
    let gram = crate::states::gram_matrix(omega);
    let (values, vectors) = hermitian_eigen(&gram);
    let top = values.last().cloned().unwrap_or(0.0);
    let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k] > tol.tau_rank * top).collect();
    let w = linalg::select_columns(&vectors, &keep);
    let sqrt: Vec<f64> = keep.iter().map(|&k| values[k].sqrt()).collect();
    let r = keep.len();
    let mut embedding = w.adjoint();
    let mut section = w.clone();
    for (row, &s) in sqrt.iter().enumerate() {
        embedding.row_mut(row).scale_mut(s);
        section.column_mut(row).unscale_mut(s);
    }
    let images = (0..algebra.dim()).map(|i| &embedding * algebra.left_regular(i) * &section).collect();
    let cyclic = &embedding * CVector::from_column_slice(algebra.unit());
    let grading_op = if is_even(omega) {
        let theta = linalg::diag(&algebra.parities().iter().map(|p| Complex64::new(p.signf(), 0.0)).collect::<Vec<_>>());
        let v = &embedding * theta * &section;
        Some(linalg::unitary_polar_factor(&linalg::hermitian_part(&v)))
    } else {
        None
    };
    Ok(GnsData { state: omega.clone(), rep: Representation::new(r, images), cyclic, grading_op, embedding })
}

impl GnsData {
    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn state(&self) -> &StateFunctional {
        &self.state
    }

    /// `π_ω(bᵢ)` for every basis element.
    pub fn rep(&self) -> &[CMatrix] {
        &self.rep.images
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn cyclic_vector(&self) -> &CVector {
        &self.cyclic
    }

    pub fn grading_op(&self) -> Option<&CMatrix> {
        self.grading_op.as_ref()
    }

    pub fn space(&self) -> Option<GradedHilbertSpace> {
        self.grading_op.as_ref().map(|v| GradedHilbertSpace { grading: v.clone() })
    }

    pub fn embedding(&self) -> &CMatrix {
        &self.embedding
    }

    /// Checks reconstruction, the *-homomorphism property, covariance and
    /// cyclicity.
    pub fn verify(&self) -> VerificationReport {
        let algebra = self.state.algebra();
        let tau = algebra.tolerances().tau_gns;
        let recon = linalg::max_abs((0..algebra.dim()).map(|i| {
            (self.cyclic.dotc(&(&self.rep.images[i] * &self.cyclic)) - self.state.values()[i]).norm()
        }));
        let hom = self.rep.star_hom_residual(algebra);
        let vectors: Vec<CVector> = self.rep.images.iter().map(|p| p * &self.cyclic).collect();
        let span = linalg::rank(&linalg::columns(&vectors, self.dim()), 1e-10);
        let mut parts = vec![
            VerificationReport::from_residual("reconstruction", recon, tau),
            VerificationReport::from_residual("star_homomorphism", hom, tau),
            VerificationReport::new("cyclic", span == self.dim(), 0.0).with("span", span as u64),
        ];
        if let Some(v) = &self.grading_op {
            let n = self.dim();
            let unitary = frob_dist(v, &v.adjoint()).max(frob_dist(&(v * v), &identity(n)));
            let fixes = (v * &self.cyclic - &self.cyclic).norm();
            let cov = linalg::max_abs((0..algebra.dim()).map(|i| {
                let lhs = &self.rep.images[i] * Complex64::new(algebra.parity(i).signf(), 0.0);
                frob_dist(&lhs, &(v * &self.rep.images[i] * v))
            }));
            parts.push(VerificationReport::from_residual("covariance", unitary.max(fixes).max(cov), tau));
        }
        VerificationReport::combine("gns", &parts).with("dim", self.dim() as u64)
    }
}

/// Checks `span{π(b)ξ_ω : b even} = Ker(I - V)` by rank tests.
pub fn even_subspace_check(g: &GnsData) -> VerificationReport {
    let Some(space) = g.space() else {
        return VerificationReport::new("even_subspace", false, f64::INFINITY).with("reason", "state is not even");
    };
    let algebra = g.state.algebra();
    let even: Vec<CVector> = algebra.even_indices().iter().map(|&i| &g.rep.images[i] * &g.cyclic).collect();
    let n = g.dim();
    let s = linalg::columns(&even, n);
    let p = space.even_projection();
    let r_span = linalg::rank(&s, 1e-10);
    let r_even = linalg::rank(&p, 1e-10);
    let mut joint = CMatrix::zeros(n, s.ncols() + n);
    joint.columns_mut(0, s.ncols()).copy_from(&s);
    joint.columns_mut(s.ncols(), n).copy_from(&p);
    let r_joint = linalg::rank(&joint, 1e-10);
    // residual: how far the span leaks into the odd subspace
    let leak = (space.odd_projection() * &s).norm();
    let pass = r_span == r_even && r_joint == r_even && leak <= 1e-9;
    VerificationReport::new("even_subspace", pass, leak)
        .with("span_dim", r_span as u64)
        .with("even_dim", r_even as u64)
        .with("joint_dim", r_joint as u64)
}

/// `π₁⊛π₂` on `H₁⊗H₂`: `bᵢ⊛cⱼ ↦ π₁(bᵢ)V₁^p ⊗ π₂(cⱼ)`, `p = 1` iff `cⱼ` odd.
pub fn fermi_rep(g1: &GnsData, g2: &GnsData, f: &FermiAlgebra) -> Result<Representation> {
    let v1 = g1.grading_op.as_ref().ok_or(Error::NotCovariant)?;
    if g2.grading_op.is_none() {
        return Err(Error::NotCovariant);
    }
    let mut images = Vec::with_capacity(f.dim());
    for i in 0..f.left().dim() {
        for j in 0..f.right().dim() {
            images.push(klein_matrix(&g1.rep.images[i], v1, f.right().parity(j), &g2.rep.images[j]));
        }
    }
    Ok(Representation::new(g1.dim() * g2.dim(), images))
}

/// Certifies `π_{ω₁×ω₂} ≅ π_{ω₁}⊛π_{ω₂}` restricted to the cyclic subspace
/// of `ξ₁⊗ξ₂`, with the intertwiner `U₀ : π(x)ξ ↦ (π₁⊛π₂)(x)(ξ₁⊗ξ₂)`.
pub fn certify_gns_product(w1: &StateFunctional, w2: &StateFunctional, f: &FermiAlgebra) -> VerificationReport {
    match certify_inner(w1, w2, f) {
        Ok(r) => r,
        Err(e) => VerificationReport::new("gns_product", false, f64::INFINITY).with("error", e.to_string()),
    }
}

fn certify_inner(w1: &StateFunctional, w2: &StateFunctional, f: &FermiAlgebra) -> Result<VerificationReport> {
    if !is_even(w1) || !is_even(w2) {
        return Err(Error::NotEven);
    }
    let tau = f.as_graded().tolerances().tau_gns;
    let omega = product_functional(w1, w2, f);
    let g = gns(&omega)?;
    let (g1, g2) = (gns(w1)?, gns(w2)?);
    let r = fermi_rep(&g1, &g2, f)?;
    let eta = linalg::kron_vec(&g1.cyclic, &g2.cyclic);
    let d = f.dim();
    let big = r.dim();

    // R e_k = r(b_k)(ξ₁⊗ξ₂); U₀ J = R, so U₀ = R J⁺.
    let cols: Vec<CVector> = r.images().iter().map(|m| m * &eta).collect();
    let rmat = linalg::columns(&cols, big);
    let gram = crate::states::gram_matrix(&omega);
    let well_defined = linalg::max_abs((rmat.adjoint() * &rmat - &gram).iter().map(|z| z.norm()));

    let j = &g.embedding;
    let section = j.adjoint() * (j * j.adjoint()).try_inverse().ok_or_else(|| Error::Shape("singular GNS frame".into()))?;
    let u0 = &rmat * section;
    let isometry = frob_dist(&(u0.adjoint() * &u0), &identity(g.dim()));
    let intertwining = linalg::max_abs((0..d).map(|k| frob_dist(&(&u0 * &g.rep.images[k]), &(&r.images()[k] * &u0))));
    let cyclic_map = (&u0 * &g.cyclic - &eta).norm();
    let range = linalg::rank(&rmat, 1e-10);

    let parts = [
        VerificationReport::from_residual("well_defined", well_defined, tau),
        VerificationReport::from_residual("isometry", isometry, tau),
        VerificationReport::from_residual("intertwining", intertwining, tau),
        VerificationReport::from_residual("cyclic_vector", cyclic_map, tau),
    ];
    Ok(VerificationReport::combine("gns_product", &parts)
        .with("dim_product_gns", g.dim() as u64)
        .with("dim_tensor", big as u64)
        .with("dim_cyclic_subspace", range as u64)
        .with("dim_left", g1.dim() as u64)
        .with("dim_right", g2.dim() as u64))
}

/// Checks `φ₁×φ₂(x) = Tr((π₁⊛π₂)(x) · T₁⊛T₂)` on the product basis, where
/// `φᵢ = Tr(πᵢ(·)Tᵢ)` and each `Tᵢ` is first replaced by its even part
/// `½(Tᵢ + VᵢTᵢVᵢ)`.
pub fn normal_state_product_identity(
    t1: &CMatrix,
    t2: &CMatrix,
    f: &FermiAlgebra,
    g1: &GnsData,
    g2: &GnsData,
) -> VerificationReport {
    let (Some(v1), Some(v2)) = (g1.grading_op(), g2.grading_op()) else {
        return VerificationReport::new("normal_state_product", false, f64::INFINITY).with("reason", "not covariant");
    };
    let even = |t: &CMatrix, v: &CMatrix| (t + v * t * v).map(|z| z * 0.5);
    let (e1, e2) = (even(t1, v1), even(t2, v2));
    let normal = |g: &GnsData, t: &CMatrix| -> Vec<Complex64> { g.rep().iter().map(|p| (p * t).trace()).collect() };
    let phi1 = normal(g1, t1);
    let phi2 = normal(g2, t2);
    let r = match fermi_rep(g1, g2, f) {
        Ok(r) => r,
        Err(e) => return VerificationReport::new("normal_state_product", false, f64::INFINITY).with("error", e.to_string()),
    };
    // T₂ is even after the reduction, so T₁⊛T₂ carries no twist.
    let tt = linalg::kron(&e1, &e2);
    let mut worst = 0.0f64;
    for k in 0..f.dim() {
        let (i, j) = f.legs(k);
        let lhs = phi1[i] * phi2[j];
        let rhs = (&r.images()[k] * &tt).trace();
        worst = worst.max((lhs - rhs).norm());
    }
    let odd_part = |t: &CMatrix, e: &CMatrix| frob_dist(t, e);
    VerificationReport::from_residual("normal_state_product", worst, g1.state().algebra().tolerances().tau_gns)
        .with("odd_part_left", odd_part(t1, &e1))
        .with("odd_part_right", odd_part(t2, &e2))
}
