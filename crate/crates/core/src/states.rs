//! Linear functionals on graded algebras: positivity, evenness, even
//! extensions, product functionals on Fermi products, purity and extreme
//! even states.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraElement, EvenSubalgebra, GradedAlgebra, Parity};
use crate::catalog;
use crate::error::{Error, Result};
use crate::fermi::FermiAlgebra;
use crate::gns::gns;
use crate::linalg::{self, c64, hermitian_eigen, CMatrix, CVector, ZERO};
use crate::report::VerificationReport;

/// A linear functional, stored by its values on the canonical basis.
#[derive(Clone, Debug)]
pub struct StateFunctional {
    algebra: Arc<GradedAlgebra>,
    values: Vec<Complex64>,
}

impl StateFunctional {
    pub fn new(algebra: &Arc<GradedAlgebra>, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), algebra.dim(), "one value per basis element");
        StateFunctional { algebra: Arc::clone(algebra), values }
    }

    pub fn zero(algebra: &Arc<GradedAlgebra>) -> Self {
        StateFunctional::new(algebra, vec![ZERO; algebra.dim()])
    }

    /// `a ↦ Tr(ρa)` for an ambient density matrix ρ.
    pub fn from_density(algebra: &Arc<GradedAlgebra>, rho: &CMatrix) -> Self {
        let values = algebra.basis().iter().map(|b| (rho * b).trace()).collect();
        StateFunctional::new(algebra, values)
    }

    /// `a ↦ ⟨ξ, aξ⟩` for an ambient vector ξ.
    pub fn vector_state(algebra: &Arc<GradedAlgebra>, xi: &CVector) -> Self {
        let values = algebra.basis().iter().map(|b| xi.dotc(&(b * xi))).collect();
        StateFunctional::new(algebra, values)
    }

    /// Normalized ambient trace. Always even, since `Tr(QaQ) = Tr(a)`.
    pub fn normalized_trace(algebra: &Arc<GradedAlgebra>) -> Self {
        let n = algebra.ambient_dim() as f64;
        let values = algebra.basis().iter().map(|b| b.trace() / n).collect();
        StateFunctional::new(algebra, values)
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn eval_coeffs(&self, x: &[Complex64]) -> Complex64 {
        x.iter().zip(&self.values).map(|(a, b)| a * b).sum()
    }

    pub fn eval(&self, a: &AlgebraElement) -> Complex64 {
        self.eval_coeffs(a.coeffs())
    }

    /// `φ ∘ ε₁`: drops the values on odd basis elements.
    pub fn even_part(&self) -> Self {
        let values = self
            .values
            .iter()
            .zip(self.algebra.parities())
            .map(|(&v, &p)| if p == Parity::Even { v } else { ZERO })
            .collect();
        StateFunctional::new(&self.algebra, values)
    }

    /// Largest `|φ(bᵢ*) - conj φ(bᵢ)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (0..self.algebra.dim())
            .map(|i| {
                let adj: Complex64 = self.algebra.involution_row(i).iter().map(|&(k, s)| s * self.values[k]).sum();
                (adj - self.values[i].conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn unit_value(&self) -> Complex64 {
        self.eval_coeffs(self.algebra.unit())
    }

    pub fn distance(&self, other: &StateFunctional) -> f64 {
        linalg::max_abs(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()))
    }

    /// Convex combination `t·self + (1-t)·other`.
    pub fn mix(&self, other: &StateFunctional, t: f64) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * t + b * (1.0 - t)).collect();
        StateFunctional::new(&self.algebra, values)
    }
}

/// `M_{ij} = φ(bᵢ* bⱼ)`.
pub fn gram_matrix(phi: &StateFunctional) -> CMatrix {
    let a = &phi.algebra;
    let d = a.dim();
    // φ(b_k b_j) for all k, j
    let mut pair = CMatrix::zeros(d, d);
    for k in 0..d {
        for j in 0..d {
            pair[(k, j)] = a.product_row(k, j).iter().map(|&(m, c)| c * phi.values[m]).sum();
        }
    }
    let mut gram = CMatrix::zeros(d, d);
    for i in 0..d {
        for &(k, s) in a.involution_row(i) {
            for j in 0..d {
                gram[(i, j)] += s * pair[(k, j)];
            }
        }
    }
    gram
}

/// Outcome of a positivity test.
#[derive(Clone, Debug)]
pub struct Positivity {
    pub positive: bool,
    /// Smallest eigenvalue of the Hermitian part of the Gram matrix.
    pub min_eigenvalue: f64,
    /// Largest entry of `M - M*`; nonzero means `φ(y*y)` is not always real.
    pub hermiticity_defect: f64,
    /// Coordinates of `y` with `φ(y*y) ∉ [0, ∞)`, when not positive.
    pub witness: Option<Vec<Complex64>>,
}

impl Positivity {
    /// Distance of the decision from the threshold: how negative or how
    /// non-Hermitian the Gram matrix is.
    pub fn violation(&self) -> f64 {
        (-self.min_eigenvalue).max(self.hermiticity_defect)
    }
}

pub fn is_positive(phi: &StateFunctional) -> Positivity {
    is_positive_with(phi, phi.algebra.tolerances().tau_state)
}

/// `φ` is positive iff its Gram matrix is Hermitian positive semidefinite.
pub fn is_positive_with(phi: &StateFunctional, tau_state: f64) -> Positivity {
    let gram = gram_matrix(phi);
    let defect = linalg::max_abs((&gram - gram.adjoint()).iter().map(|z| z.norm()));
    let (values, vectors) = hermitian_eigen(&gram);
    let min_eigenvalue = values.first().cloned().unwrap_or(0.0);
    let positive = min_eigenvalue >= -tau_state && defect <= tau_state;
    let witness = if positive {
        None
    } else if min_eigenvalue < -tau_state {
        Some(vectors.column(0).iter().cloned().collect())
    } else {
        // Re φ(y*y) ≥ 0 everywhere, so look for a non-real value.
        let skew = (&gram - gram.adjoint()).map(|z| z * c64(0.0, -0.5));
        let (sv, svec) = hermitian_eigen(&skew);
        let k = if sv[0].abs() > sv[sv.len() - 1].abs() { 0 } else { sv.len() - 1 };
        Some(svec.column(k).iter().cloned().collect())
    };
    Positivity { positive, min_eigenvalue, hermiticity_defect: defect, witness }
}

/// `φ(y*y)` for coordinates `y`.
pub fn value_on_square(phi: &StateFunctional, y: &[Complex64]) -> Complex64 {
    let a = &phi.algebra;
    phi.eval_coeffs(&a.multiply_coeffs(&a.adjoint_coeffs(y), y))
}

pub fn is_even(phi: &StateFunctional) -> bool {
    is_even_with(phi, phi.algebra.tolerances().tau_state)
}

/// `φ∘θ = φ`, i.e. φ vanishes on the odd basis elements.
pub fn is_even_with(phi: &StateFunctional, tau_state: f64) -> bool {
    phi.algebra.odd_indices().iter().all(|&i| phi.values[i].norm() <= tau_state)
}

/// Checks the state axioms: unital, Hermitian, positive.
pub fn check_state(phi: &StateFunctional) -> Result<()> {
    let tol = phi.algebra.tolerances().tau_state;
    let u = phi.unit_value();
    if (u - 1.0).norm() > tol {
        return Err(Error::NotUnital((u - 1.0).norm()));
    }
    let p = is_positive(phi);
    if !p.positive {
        return Err(Error::NotPositive(-p.violation()));
    }
    Ok(())
}

/// `ω ↦ ω↾𝔄₊`.
pub fn restrict_to_even(phi: &StateFunctional, even: &EvenSubalgebra) -> StateFunctional {
    let values = even.indices.iter().map(|&i| phi.values[i]).collect();
    StateFunctional::new(&even.algebra, values)
}

/// The unique even extension `ω₊∘ε₁` of a state on `𝔄₊`.
pub fn even_extension(omega_plus: &StateFunctional, even: &EvenSubalgebra) -> Result<StateFunctional> {
    if omega_plus.values.len() != even.indices.len() {
        return Err(Error::Shape("state does not live on this even subalgebra".into()));
    }
    check_state(omega_plus).map_err(|e| Error::NotAState(e.to_string()))?;
    let mut values = vec![ZERO; even.parent.dim()];
    for (k, &i) in even.indices.iter().enumerate() {
        values[i] = omega_plus.values[k];
    }
    Ok(StateFunctional::new(&even.parent, values))
}

/// `ω₁×ω₂` on the Fermi product: `bᵢ⊛cⱼ ↦ ω₁(bᵢ)ω₂(cⱼ)`.
pub fn product_functional(w1: &StateFunctional, w2: &StateFunctional, f: &FermiAlgebra) -> StateFunctional {
    assert_eq!(w1.values.len(), f.left().dim());
    assert_eq!(w2.values.len(), f.right().dim());
    let values = w1.values.iter().flat_map(|&a| w2.values.iter().map(move |&b| a * b)).collect();
    StateFunctional::new(f.as_graded(), values)
}

/// Purity via triviality of the commutant of the GNS representation.
pub fn is_pure(omega: &StateFunctional) -> Result<bool> {
    let g = gns(omega)?;
    Ok(linalg::commutant_dimension(g.rep(), 1e-9) == 1)
}

/// Extreme points of the even states are exactly the even states whose
/// restriction to `𝔄₊` is pure.
pub fn is_extreme_even(omega: &StateFunctional) -> Result<bool> {
    if !is_even(omega) {
        return Err(Error::NotEven);
    }
    let even = omega.algebra.even_part();
    is_pure(&restrict_to_even(omega, &even))
}

/// Orbits of an involutive permutation, smallest element first.
pub fn orbits(perm: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = perm.len();
    if perm.iter().any(|&p| p >= n) || (0..n).any(|x| perm[perm[x]] != x) {
        return Err(Error::NotInvolutive);
    }
    Ok((0..n)
        .filter(|&x| perm[x] >= x)
        .map(|x| if perm[x] == x { vec![x] } else { vec![x, perm[x]] })
        .collect())
}

/// Extreme even states of `(C(X), f ↦ f∘perm)`: `δ_x` on fixed points and
/// `½(δ_x + δ_{perm(x)})` on 2-orbits. States live on
/// [`catalog::build_commutative`]`(x_size, perm)`.
pub fn enumerate_extreme_even_commutative(x_size: usize, perm: &[usize]) -> Result<Vec<StateFunctional>> {
    if perm.len() != x_size {
        return Err(Error::Shape(format!("permutation of length {} for X of size {x_size}", perm.len())));
    }
    let orbs = orbits(perm)?;
    let algebra = Arc::new(catalog::build_commutative(x_size, perm)?);
    Ok(orbs
        .iter()
        .map(|orbit| {
            let w = 1.0 / orbit.len() as f64;
            let mut rho = CMatrix::zeros(x_size, x_size);
            for &x in orbit {
                rho[(x, x)] = c64(w, 0.0);
            }
            StateFunctional::from_density(&algebra, &rho)
        })
        .collect())
}

/// Samples pure states of `𝔄₊` block by block and extends them evenly.
///
/// `𝔄₊` is split into simple blocks by the spectral projections of a
/// random self-adjoint central element. In a block, a vector state on a top
/// eigenvector of a random self-adjoint element is pure; its GNS space is
/// the block's irreducible representation, in which random unit vectors
/// give random pure states.
pub struct ExtremeEvenSampler {
    even: EvenSubalgebra,
    blocks: Vec<CMatrix>,
}

const CENTER_GAP: f64 = 1e-6;
const CENTER_RETRIES: usize = 32;

impl ExtremeEvenSampler {
    pub fn new(algebra: &Arc<GradedAlgebra>, rng: &mut ChaCha8Rng) -> Result<Self> {
        let even = algebra.even_part();
        let blocks = central_blocks(&even.algebra, rng)?;
        Ok(ExtremeEvenSampler { even, blocks })
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Minimal central projections of `𝔄₊`, as ambient matrices.
    pub fn block_projections(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn even_subalgebra(&self) -> &EvenSubalgebra {
        &self.even
    }

    /// Random pure state of `𝔄₊` supported on `block`, extended evenly.
    pub fn sample_in_block(&self, block: usize, rng: &mut ChaCha8Rng) -> Result<StateFunctional> {
        let e = &self.even.algebra;
        let p = &self.blocks[block];
        let n = e.ambient_dim();
        let coeffs: Vec<Complex64> = (0..e.dim()).map(|_| gaussian_complex(rng)).collect();
        let h = linalg::hermitian_part(&e.matrix_of(&coeffs));
        let shift = linalg::operator_norm(&h) + 1.0;
        let shifted = p * (&h + linalg::identity(n) * c64(shift, 0.0)) * p;
        let (_, vecs) = hermitian_eigen(&shifted);
        let top: CVector = vecs.column(n - 1).into_owned();
        let seed_state = StateFunctional::vector_state(e, &top);
        let g = gns(&seed_state)?;
        let m = g.dim();
        let mut u = CVector::from_iterator(m, (0..m).map(|_| gaussian_complex(rng)));
        u.unscale_mut(u.norm());
        let values = g.rep().iter().map(|pi| u.dotc(&(pi * &u))).collect();
        let pure = StateFunctional::new(e, values);
        even_extension(&pure, &self.even)
    }
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im)
}

/// Spectral projections of a random self-adjoint central element; retried
/// until distinct eigenvalues are separated by at least `CENTER_GAP` and
/// their number matches the dimension of the center.
fn central_blocks(e: &Arc<GradedAlgebra>, rng: &mut ChaCha8Rng) -> Result<Vec<CMatrix>> {
    let d = e.dim();
    let mut normal = CMatrix::zeros(d, d);
    for i in 0..d {
        let mut comm = CMatrix::zeros(d, d);
        for j in 0..d {
            for &(k, c) in e.product_row(j, i) {
                comm[(k, j)] += c;
            }
            for &(k, c) in e.product_row(i, j) {
                comm[(k, j)] -= c;
            }
        }
        normal += comm.adjoint() * &comm;
    }
    let center = linalg::psd_kernel(&normal, 1e-9);
    let zdim = center.ncols();
    let n = e.ambient_dim();
    for _ in 0..CENTER_RETRIES {
        let r: Vec<f64> = (0..zdim).map(|_| rng.sample(StandardNormal)).collect();
        let mut z = vec![ZERO; d];
        for (k, &rk) in r.iter().enumerate() {
            for (i, zi) in z.iter_mut().enumerate() {
                *zi += center[(i, k)] * rk;
            }
        }
        let h = linalg::hermitian_part(&e.matrix_of(&z));
        let scale = linalg::operator_norm(&h).max(1e-300);
        let (vals, vecs) = hermitian_eigen(&h);
        let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
        let mut min_gap = f64::INFINITY;
        for k in 1..n {
            let gap = (vals[k] - vals[k - 1]) / scale;
            if gap > 1e-8 {
                min_gap = min_gap.min(gap);
                clusters.push(vec![k]);
            } else {
                clusters.last_mut().unwrap().push(k);
            }
        }
        if clusters.len() != zdim || min_gap < CENTER_GAP {
            continue;
        }
        return Ok(clusters
            .iter()
            .map(|cols| {
                let v = linalg::select_columns(&vecs, cols);
                &v * v.adjoint()
            })
            .collect());
    }
    Err(Error::RelationViolation("could not separate the center of the even subalgebra".into()))
}

/// `count` extreme even states, cycling over the simple blocks of `𝔄₊`.
pub fn sample_extreme_even(algebra: &Arc<GradedAlgebra>, count: usize, seed: u64) -> Result<Vec<StateFunctional>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = ExtremeEvenSampler::new(algebra, &mut rng)?;
    (0..count).map(|k| sampler.sample_in_block(k % sampler.num_blocks(), &mut rng)).collect()
}

/// A random density-matrix state. Even states use the even part of a
/// random positive definite `ρ`; non-even ones add back the odd part scaled
/// to half of the largest value keeping `ρ` positive, so the odd component
/// is never negligible.
pub fn random_density_state(a: &Arc<GradedAlgebra>, even: bool, rng: &mut ChaCha8Rng) -> StateFunctional {
    let n = a.ambient_dim();
    let g = CMatrix::from_fn(n, n, |_, _| gaussian_complex(rng));
    let q = a.grading_unitary();
    let rho = &g * g.adjoint() + linalg::identity(n);
    let rho_even = (&rho + q * &rho * q).map(|z| z * 0.5);
    let rho_odd = (&rho - q * &rho * q).map(|z| z * 0.5);
    let mut density = rho_even.clone();
    let odd_norm = linalg::operator_norm(&rho_odd);
    if !even && odd_norm > 0.0 {
        let floor = hermitian_eigen(&rho_even).0[0];
        density += rho_odd.map(|z| z * (0.5 * floor / odd_norm));
    }
    let tr = density.trace();
    StateFunctional::from_density(a, &density.map(|z| z / tr))
}

/// Seeded test of "ω₁×ω₂ is positive iff ω₁ or ω₂ is even" on `pairs`
/// random pairs. Each marginal is even with probability one half. Negative
/// decisions must clear `margin`.
pub fn check_positivity_criterion(f: &FermiAlgebra, pairs: usize, margin: f64, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = f.as_graded().tolerances().tau_state;
    let (mut mismatches, mut weakest_violation, mut worst_positive) = (0u64, f64::INFINITY, 0.0f64);
    let mut counts = [0u64; 2];
    for _ in 0..pairs {
        let e1 = rng.random_bool(0.5);
        let e2 = rng.random_bool(0.5);
        let w1 = random_density_state(f.left(), e1, &mut rng);
        let w2 = random_density_state(f.right(), e2, &mut rng);
        let expected = is_even(&w1) || is_even(&w2);
        let p = is_positive_with(&product_functional(&w1, &w2, f), tau);
        if p.positive != expected {
            mismatches += 1;
        }
        if expected {
            counts[0] += 1;
            worst_positive = worst_positive.max(p.violation().max(0.0));
        } else {
            counts[1] += 1;
            weakest_violation = weakest_violation.min(p.violation());
        }
    }
    let weak = counts[1] > 0 && weakest_violation < margin;
    let mut report = VerificationReport::new("positivity_criterion", mismatches == 0 && !weak, worst_positive)
        .with("pairs", pairs as u64)
        .with("mismatches", mismatches)
        .with("positive_pairs", counts[0])
        .with("non_positive_pairs", counts[1])
        .with("margin", margin);
    if counts[1] > 0 {
        report = report.with("weakest_violation", weakest_violation);
    }
    report
}

/// For `ω = ω₁×ω₂` with both marginals non-even, an element `h` with
/// `ω(h*h) ∉ [0, ∞)`, reported with the offending value.
pub fn positivity_witness(w1: &StateFunctional, w2: &StateFunctional, f: &FermiAlgebra) -> VerificationReport {
    let phi = product_functional(w1, w2, f);
    let p = is_positive(&phi);
    let Some(y) = p.witness.as_ref() else {
        return VerificationReport::new("positivity_witness", false, 0.0).with("reason", "functional is positive");
    };
    let v = value_on_square(&phi, y);
    let off = (-v.re).max(v.im.abs());
    VerificationReport::new("positivity_witness", off > f.as_graded().tolerances().tau_state, off)
        .with("value_re", v.re)
        .with("value_im", v.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{validate_algebra, AlgebraSpec};
    use crate::fermi::build_fermi_product;
    use crate::linalg::{identity, pauli_x, pauli_y, pauli_z, real_matrix, ONE};

    fn m2() -> Arc<GradedAlgebra> {
        let spec = AlgebraSpec {
            ambient_dim: 2,
            basis: vec![identity(2), pauli_z(), pauli_x(), pauli_y()],
            grading_unitary: pauli_z(),
        };
        Arc::new(validate_algebra(&spec).unwrap())
    }

    fn plus_state(a: &Arc<GradedAlgebra>) -> StateFunctional {
        let s = 1.0 / 2f64.sqrt();
        StateFunctional::vector_state(a, &CVector::from_vec(vec![c64(s, 0.0), c64(s, 0.0)]))
    }

    fn delta11(a: &Arc<GradedAlgebra>) -> StateFunctional {
        StateFunctional::from_density(a, &real_matrix(2, &[1.0, 0.0, 0.0, 0.0]))
    }

    #[test]
    fn gram_of_trace_is_identity() {
        let a = m2();
        let g = gram_matrix(&StateFunctional::normalized_trace(&a));
        assert!(linalg::frob_dist(&g, &identity(4)) < 1e-14);
    }

    #[test]
    fn gram_of_delta_is_rank_two_psd() {
        let a = m2();
        let g = gram_matrix(&delta11(&a));
        // brute force: M_ij = (b_i* b_j)_{11}
        for i in 0..4 {
            for j in 0..4 {
                let m = a.basis()[i].adjoint() * &a.basis()[j];
                assert!((g[(i, j)] - m[(0, 0)]).norm() < 1e-14);
            }
        }
        assert_eq!(linalg::rank(&g, 1e-10), 2);
        assert!(is_positive(&delta11(&a)).positive);
        assert_eq!(gram_matrix(&StateFunctional::zero(&a)).norm(), 0.0);
    }

    #[test]
    fn positivity_examples() {
        let a = m2();
        assert!(is_positive(&plus_state(&a)).positive);

        let f = build_fermi_product(&a, &a);
        let w = plus_state(&a);
        let ww = product_functional(&w, &w, &f);
        let p = is_positive(&ww);
        assert!(!p.positive);
        assert!(p.min_eigenvalue < -1e-6);
        let y = p.witness.unwrap();
        assert!(value_on_square(&ww, &y).re < -1e-6);
        // h = i(σx⊗σx) is self-adjoint with a non-real expectation
        let h = crate::fermi::FermiElement::basis(&f, 2, 2).scale(crate::linalg::I);
        assert!(h.adjoint().distance(&h) < 1e-14);
        assert!((ww.eval_coeffs(h.coeffs()) - crate::linalg::I).norm() < 1e-14);

        let t = StateFunctional::normalized_trace(&a);
        assert!(is_positive(&product_functional(&t, &t, &f)).positive);
    }

    #[test]
    fn positivity_criterion_on_random_pairs() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let r = check_positivity_criterion(&f, 200, 1e-6, 11);
        println!("{}", serde_json::to_string(&r).unwrap());
        assert!(r.pass);
        assert!(r.detail("non_positive_pairs").unwrap().as_u64().unwrap() > 20);
        let w = plus_state(&a);
        assert!(positivity_witness(&w, &w, &f).pass);
        let t = StateFunctional::normalized_trace(&a);
        assert!(!positivity_witness(&t, &w, &f).pass);
    }

    #[test]
    fn evenness_examples() {
        let a = m2();
        assert!(is_even(&StateFunctional::normalized_trace(&a).even_part()));
        assert!(!is_even(&plus_state(&a)));
        let triv = Arc::new(a.with_trivial_grading());
        assert!(is_even(&plus_state(&triv)));
    }

    #[test]
    fn even_extension_examples() {
        let a = m2();
        let even = a.even_part();
        // δ₁ on the diagonals
        let d1 = StateFunctional::new(&even.algebra, vec![ONE, ONE]);
        let ext = even_extension(&d1, &even).unwrap();
        assert!(ext.distance(&delta11(&a)) < 1e-15);
        assert!(is_even(&ext));
        assert!(restrict_to_even(&ext, &even).distance(&d1) == 0.0);

        let tr_plus = restrict_to_even(&StateFunctional::normalized_trace(&a), &even);
        let ext = even_extension(&tr_plus, &even).unwrap();
        assert!(ext.distance(&StateFunctional::normalized_trace(&a).even_part()) < 1e-15);

        let bad = StateFunctional::new(&even.algebra, vec![ONE, c64(2.0, 0.0)]);
        assert!(matches!(even_extension(&bad, &even), Err(Error::NotAState(_))));
    }

    #[test]
    fn product_functional_evenness() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let t = StateFunctional::normalized_trace(&a);
        let w = plus_state(&a);
        let tw = product_functional(&t, &w, &f);
        assert!(is_positive(&tw).positive);
        assert!(!is_even(&tw));
        assert!(is_even(&product_functional(&t, &t, &f)));
        assert!(!is_positive(&product_functional(&w, &w, &f)).positive);
    }

    #[test]
    fn purity_examples() {
        let a = m2();
        assert!(is_pure(&delta11(&a)).unwrap());
        assert!(!is_pure(&StateFunctional::normalized_trace(&a)).unwrap());
        let c3 = Arc::new(catalog::build_commutative(3, &[0, 1, 2]).unwrap());
        let mut rho = CMatrix::zeros(3, 3);
        rho[(1, 1)] = ONE;
        assert!(is_pure(&StateFunctional::from_density(&c3, &rho)).unwrap());
    }

    #[test]
    fn extreme_even_examples() {
        let a = m2();
        assert!(is_extreme_even(&delta11(&a)).unwrap());
        assert!(!is_extreme_even(&StateFunctional::normalized_trace(&a)).unwrap());
        assert!(matches!(is_extreme_even(&plus_state(&a)), Err(Error::NotEven)));
        for s in enumerate_extreme_even_commutative(2, &[1, 0]).unwrap() {
            assert!(is_extreme_even(&s).unwrap());
        }
    }

    #[test]
    fn commutative_enumeration() {
        let states = enumerate_extreme_even_commutative(4, &[1, 0, 2, 3]).unwrap();
        assert_eq!(states.len(), 3);
        assert_eq!(enumerate_extreme_even_commutative(4, &[0, 1, 2, 3]).unwrap().len(), 4);
        assert_eq!(enumerate_extreme_even_commutative(2, &[1, 0]).unwrap().len(), 1);
        assert!(matches!(enumerate_extreme_even_commutative(3, &[1, 2, 0]), Err(Error::NotInvolutive)));
    }

    #[test]
    fn sampled_states_on_graded_m2_are_diagonal_deltas() {
        let a = m2();
        let states = sample_extreme_even(&a, 6, 11).unwrap();
        let d1 = delta11(&a);
        let d2 = StateFunctional::from_density(&a, &real_matrix(2, &[0.0, 0.0, 0.0, 1.0]));
        for s in &states {
            assert!(s.distance(&d1) < 1e-10 || s.distance(&d2) < 1e-10, "{s:?}");
            assert!(is_extreme_even(s).unwrap());
        }
    }

    #[test]
    fn sampled_states_on_trivial_m2_are_vector_states() {
        let a = Arc::new(m2().with_trivial_grading());
        for s in sample_extreme_even(&a, 5, 3).unwrap() {
            assert!(is_pure(&s).unwrap());
            // a pure state of M₂ has Bloch vector of unit length
            let r2: f64 = (1..4).map(|i| s.values()[i].re.powi(2)).sum();
            assert!((r2 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sampled_states_on_commutative_are_enumerated_ones() {
        let perm = [1, 0, 2, 3];
        let enumerated = enumerate_extreme_even_commutative(4, &perm).unwrap();
        let a = Arc::clone(enumerated[0].algebra());
        for s in sample_extreme_even(&a, 9, 5).unwrap() {
            assert!(enumerated.iter().any(|e| e.distance(&s) < 1e-10));
        }
    }
}
