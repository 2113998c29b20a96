//! Builders for standard graded algebras and the CAR composition check.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{validate_algebra, AlgebraSpec, GradedAlgebra};
use crate::error::{Error, Result};
use crate::fermi::{build_fermi_product, build_ungraded_product, FermiAlgebra, FermiElement};
use crate::linalg::{self, c64, diag, identity, kron, CMatrix, CVector, ONE};
use crate::report::VerificationReport;

/// Largest ambient dimension the builders accept.
pub const AMBIENT_CAP: usize = 64;

/// Full `M_n` with `Q = diag(parity)` and the matrix-unit basis.
pub fn build_graded_matrix(n: usize, parity: &[i8]) -> Result<GradedAlgebra> {
    if parity.len() != n || parity.iter().any(|&p| p != 1 && p != -1) {
        return Err(Error::Shape("parity vector must have n entries in {+1, -1}".into()));
    }
    check_cap(n)?;
    let mut basis = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut m = CMatrix::zeros(n, n);
            m[(r, c)] = ONE;
            basis.push(m);
        }
    }
    let q = diag(&parity.iter().map(|&p| c64(p as f64, 0.0)).collect::<Vec<_>>());
    validate_algebra(&AlgebraSpec { ambient_dim: n, basis, grading_unitary: q })
}

/// `C(X)` for `X = {0..x_size}` as diagonal matrices, graded by `f ↦ f∘perm`
/// (`Q` = permutation matrix of the involution `perm`).
pub fn build_commutative(x_size: usize, perm: &[usize]) -> Result<GradedAlgebra> {
    if perm.len() != x_size {
        return Err(Error::Shape(format!("permutation of length {} for X of size {x_size}", perm.len())));
    }
    if perm.iter().any(|&p| p >= x_size) || (0..x_size).any(|x| perm[perm[x]] != x) {
        return Err(Error::NotInvolutive);
    }
    check_cap(x_size)?;
    let basis = (0..x_size)
        .map(|x| {
            let mut m = CMatrix::zeros(x_size, x_size);
            m[(x, x)] = ONE;
            m
        })
        .collect();
    let mut q = CMatrix::zeros(x_size, x_size);
    for (x, &p) in perm.iter().enumerate() {
        q[(p, x)] = ONE;
    }
    validate_algebra(&AlgebraSpec { ambient_dim: x_size, basis, grading_unitary: q })
}

/// The CAR algebra on `k` modes, `M_{2^k}` with the parity grading.
#[derive(Clone, Debug)]
pub struct CarAlgebra {
    pub algebra: Arc<GradedAlgebra>,
    /// Annihilators `c₁..c_k` as ambient matrices.
    pub annihilators: Vec<CMatrix>,
}

/// Jordan-Wigner model: `cⱼ = σ_z^{⊗(j-1)} ⊗ a ⊗ I^{⊗(k-j)}` with
/// `a = (σ_x + iσ_y)/2`, and `Q = σ_z^{⊗k}`.
pub fn build_car(k: usize) -> Result<CarAlgebra> {
    if k == 0 {
        return Err(Error::Shape("CAR needs at least one mode".into()));
    }
    let n = 1usize << k;
    check_cap(n)?;
    let lower = linalg::real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
    let z = linalg::pauli_z();
    let i2 = identity(2);
    let annihilators: Vec<CMatrix> = (0..k)
        .map(|j| {
            let mut m = CMatrix::identity(1, 1);
            for site in 0..k {
                let factor = match site.cmp(&j) {
                    std::cmp::Ordering::Less => &z,
                    std::cmp::Ordering::Equal => &lower,
                    std::cmp::Ordering::Greater => &i2,
                };
                m = kron(&m, factor);
            }
            m
        })
        .collect();
    let mut q = CMatrix::identity(1, 1);
    for _ in 0..k {
        q = kron(&q, &z);
    }
    let worst = car_relation_residual(&annihilators);
    if worst > 1e-12 {
        return Err(Error::RelationViolation(format!("CAR residual {worst:.3e}")));
    }
    let parity: Vec<i8> = (0..n).map(|s| if q[(s, s)].re > 0.0 { 1 } else { -1 }).collect();
    let algebra = build_graded_matrix(n, &parity)?;
    Ok(CarAlgebra { algebra: Arc::new(algebra), annihilators })
}

fn check_cap(n: usize) -> Result<()> {
    if n > AMBIENT_CAP {
        return Err(Error::Shape(format!("ambient dimension {n} exceeds cap {AMBIENT_CAP}")));
    }
    Ok(())
}

fn car_relation_residual(c: &[CMatrix]) -> f64 {
    let n = c[0].nrows();
    let mut worst: f64 = 0.0;
    for (i, ci) in c.iter().enumerate() {
        for (j, cj) in c.iter().enumerate() {
            worst = worst.max((ci * cj + cj * ci).norm());
            let target = if i == j { identity(n) } else { CMatrix::zeros(n, n) };
            worst = worst.max(linalg::frob_dist(&(ci * cj.adjoint() + cj.adjoint() * ci), &target));
        }
    }
    worst
}

/// One anticommutator identity `{x, y} = expected`.
#[derive(Clone, Debug, Serialize)]
pub struct CarRelation {
    pub left: String,
    pub right: String,
    pub expected_identity: bool,
    pub residual: f64,
}

/// In `CAR(m) ⊛ CAR(n)`, checks that the annihilators and creators
/// `{cᵢ⊗1, cᵢ*⊗1, 1⊗dⱼ, 1⊗dⱼ*}` satisfy the CAR(m+n) relations under the
/// Fermi product, and that they generate an algebra of dimension
/// `2^{2(m+n)}`. Anticommutators are evaluated for every ordered pair.
pub fn check_car_composition(m: usize, n: usize) -> Result<VerificationReport> {
    let (a, b) = (build_car(m)?, build_car(n)?);
    Ok(car_composition_report("car_composition", &build_fermi_product(&a.algebra, &b.algebra), &a, &b))
}

/// The same relations in the ordinary tensor product; expected to fail.
pub fn check_car_composition_ungraded(m: usize, n: usize) -> Result<VerificationReport> {
    let (a, b) = (build_car(m)?, build_car(n)?);
    Ok(car_composition_report("car_composition_ungraded", &build_ungraded_product(&a.algebra, &b.algebra), &a, &b))
}

fn car_composition_report(name: &str, f: &Arc<FermiAlgebra>, a: &CarAlgebra, b: &CarAlgebra) -> VerificationReport {
    let elem = |alg: &Arc<GradedAlgebra>, m: &CMatrix| {
        crate::algebra::AlgebraElement::from_matrix(alg, m.clone()).expect("generator lies in the algebra")
    };
    let one_left = crate::algebra::AlgebraElement::identity(f.left());
    let one_right = crate::algebra::AlgebraElement::identity(f.right());
    // (label, element, mode index, is_creator)
    let mut gens: Vec<(String, FermiElement, usize, bool)> = Vec::new();
    for (i, c) in a.annihilators.iter().enumerate() {
        let x = FermiElement::simple(f, &elem(f.left(), c), &one_right).unwrap();
        gens.push((format!("c{}⊗1", i + 1), x.clone(), i, false));
        gens.push((format!("c{}*⊗1", i + 1), x.adjoint(), i, true));
    }
    let offset = a.annihilators.len();
    for (j, d) in b.annihilators.iter().enumerate() {
        let x = FermiElement::simple(f, &one_left, &elem(f.right(), d)).unwrap();
        gens.push((format!("1⊗d{}", j + 1), x.clone(), offset + j, false));
        gens.push((format!("1⊗d{}*", j + 1), x.adjoint(), offset + j, true));
    }
    let one = FermiElement::identity(f);
    let zero = FermiElement::zero(f);
    let mut relations = Vec::new();
    for (lx, x, mx, cx) in &gens {
        for (ly, y, my, cy) in &gens {
            let anti = x.mul(y).add(&y.mul(x));
            let expected_identity = mx == my && cx != cy;
            let target = if expected_identity { &one } else { &zero };
            relations.push(CarRelation {
                left: lx.clone(),
                right: ly.clone(),
                expected_identity,
                residual: anti.distance(target),
            });
        }
    }
    let worst = relations.iter().map(|r| r.residual).fold(0.0, f64::max);
    let failing: Vec<String> =
        relations.iter().filter(|r| r.residual > 1e-10).map(|r| format!("{{{}, {}}}", r.left, r.right)).collect();

    let generated = generated_dimension(f, &gens.iter().map(|g| g.1.clone()).collect::<Vec<_>>());
    let expected_dim = 1usize << (2 * (a.annihilators.len() + b.annihilators.len()));
    let mut report = VerificationReport::from_residual(name, worst, 1e-10)
        .with("relations", relations.len() as u64)
        .with("failing", failing.len() as u64)
        .with("generated_dim", generated as u64)
        .with("expected_dim", expected_dim as u64);
    if !failing.is_empty() {
        let mut shown = failing;
        shown.truncate(8);
        report = report.fail_with("failing_relations", shown);
    }
    if generated != expected_dim {
        report = report.fail_with("dimension_mismatch", true);
    }
    report
}

/// Dimension of the unital algebra generated by `gens`, by closing the
/// span under multiplication.
fn generated_dimension(f: &Arc<FermiAlgebra>, gens: &[FermiElement]) -> usize {
    let to_vec = |x: &FermiElement| CVector::from_column_slice(x.coeffs());
    let mut span: Vec<FermiElement> = vec![FermiElement::identity(f)];
    let mut frontier = span.clone();
    loop {
        let mut fresh = Vec::new();
        for x in &frontier {
            for g in gens {
                let candidate = x.mul(g);
                let mut all: Vec<CVector> = span.iter().chain(fresh.iter()).map(to_vec).collect();
                all.push(to_vec(&candidate));
                if linalg::independent_subset(&all, 1e-10).len() == all.len() {
                    fresh.push(candidate);
                }
            }
        }
        if fresh.is_empty() {
            return span.len();
        }
        span.extend(fresh.iter().cloned());
        frontier = fresh;
    }
}

/// A named algebra from the default catalog.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: Arc<GradedAlgebra>,
    pub description: String,
}

fn entry(name: &str, description: &str, algebra: GradedAlgebra) -> CatalogEntry {
    CatalogEntry { name: name.into(), algebra: Arc::new(algebra), description: description.into() }
}

/// Names accepted by [`build_named`].
pub const CATALOG_NAMES: &[&str] =
    &["M2", "M2_trivial", "M3_odd", "M4_balanced", "C2_swap", "C3_trivial", "C4", "C4_two_swaps", "CAR1", "CAR2"];

pub fn build_named(name: &str) -> Result<CatalogEntry> {
    Ok(match name {
        "M2" => entry(name, "graded matrix algebra, Q = diag(1,-1)", build_graded_matrix(2, &[1, -1])?),
        "M2_trivial" => entry(name, "trivially graded matrix algebra", build_graded_matrix(2, &[1, 1])?),
        "M3_odd" => entry(name, "graded matrix algebra, Q = diag(1,1,-1)", build_graded_matrix(3, &[1, 1, -1])?),
        "M4_balanced" => {
            entry(name, "graded matrix algebra, Q = diag(1,1,-1,-1)", build_graded_matrix(4, &[1, 1, -1, -1])?)
        }
        "C2_swap" => entry(name, "C(X), |X| = 2, swap involution", build_commutative(2, &[1, 0])?),
        "C3_trivial" => entry(name, "C(X), |X| = 3, identity involution", build_commutative(3, &[0, 1, 2])?),
        "C4" => entry(name, "C(X), |X| = 4, involution (1 2)", build_commutative(4, &[1, 0, 2, 3])?),
        "C4_two_swaps" => entry(name, "C(X), |X| = 4, involution (1 2)(3 4)", build_commutative(4, &[1, 0, 3, 2])?),
        "CAR1" => CatalogEntry {
            name: name.into(),
            algebra: build_car(1)?.algebra,
            description: "CAR algebra, one mode".into(),
        },
        "CAR2" => CatalogEntry {
            name: name.into(),
            algebra: build_car(2)?.algebra,
            description: "CAR algebra, two modes".into(),
        },
        other => return Err(Error::Shape(format!("unknown catalog entry {other}"))),
    })
}

/// The default catalog.
pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG_NAMES.iter().map(|n| build_named(n).expect("catalog entries are valid")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Parity;

    #[test]
    fn graded_matrix_examples() {
        let a = build_graded_matrix(2, &[1, -1]).unwrap();
        assert_eq!(a.dim(), 4);
        assert_eq!(a.even_indices().len(), 2);
        let t = build_graded_matrix(2, &[1, 1]).unwrap();
        assert!(t.is_trivially_graded());
        let b = build_graded_matrix(4, &[1, 1, -1, -1]).unwrap();
        assert_eq!(b.even_indices().len(), 8);
    }

    #[test]
    fn commutative_examples() {
        let a = build_commutative(2, &[1, 0]).unwrap();
        assert_eq!(a.even_indices().len(), 1);
        assert_eq!(a.odd_indices().len(), 1);
        let odd = &a.basis()[a.odd_indices()[0]];
        assert!((odd[(0, 0)] + odd[(1, 1)]).norm() < 1e-15);
        assert!(build_commutative(3, &[0, 1, 2]).unwrap().is_trivially_graded());
        assert_eq!(build_commutative(4, &[1, 0, 2, 3]).unwrap().even_indices().len(), 3);
        assert!(matches!(build_commutative(3, &[1, 2, 0]), Err(Error::NotInvolutive)));
    }

    #[test]
    fn car_examples() {
        let one = build_car(1).unwrap();
        let expected = (linalg::pauli_x() + linalg::pauli_y() * linalg::I).map(|z| z * 0.5);
        assert!(linalg::frob_dist(&one.annihilators[0], &expected) < 1e-15);
        assert_eq!(one.algebra.grading_unitary(), &linalg::pauli_z());

        let two = build_car(2).unwrap();
        assert_eq!(two.algebra.dim(), 16);
        assert!(car_relation_residual(&two.annihilators) < 1e-12);
        for k in 1..=3 {
            let car = build_car(k).unwrap();
            assert!(car.annihilators[0].pow(2).norm() < 1e-15);
            assert_eq!(car.algebra.even_indices().len(), 1 << (2 * k - 1));
            for c in &car.annihilators {
                let q = car.algebra.grading_unitary();
                assert!(linalg::frob_dist(&(q * c * q), &(-c)) < 1e-15);
            }
        }
    }

    #[test]
    fn car_composition_and_negative_control() {
        let r = check_car_composition(1, 1).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.detail("generated_dim").unwrap(), 16);
        let bad = check_car_composition_ungraded(1, 1).unwrap();
        assert!(!bad.pass);
    }

    #[test]
    fn catalog_entries_validate_with_involutive_theta() {
        for e in catalog() {
            assert!(e.algebra.theta_automorphism_residual() < 1e-12, "{}", e.name);
            let q = e.algebra.grading_unitary();
            for (b, p) in e.algebra.basis().iter().zip(e.algebra.parities()) {
                let sign = if *p == Parity::Even { 1.0 } else { -1.0 };
                assert!(linalg::frob_dist(&(q * b * q), &b.map(|z| z * sign)) < 1e-12);
            }
        }
    }
}
