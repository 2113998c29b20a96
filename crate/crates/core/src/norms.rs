//! The spatial norm on Fermi products and its finite-dimensional
//! certificates.
//!
//! The authoritative value is the operator norm in the Fermi product of the
//! GNS representations of the normalized traces. Those states are faithful
//! and even, so the product representation is faithful and hence isometric.
//! Sampling over extreme even states only corroborates.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::algebra::{AlgebraElement, GradedAlgebra, Parity};
use crate::error::Result;
use crate::fermi::{FermiAlgebra, FermiElement};
use crate::gns::{fermi_rep, gns, Representation};
use crate::io::{complex_to_json, JsonComplex};
use crate::linalg::{self, c64, operator_norm, CMatrix, ZERO};
use crate::report::VerificationReport;
use crate::states::{ExtremeEvenSampler, StateFunctional};

const CROSS_TOL: f64 = 1e-8;
const COMPAT_TOL: f64 = 1e-8;
const COLLAPSE_TOL: f64 = 1e-8;
const SANDWICH_SLACK: f64 = 1e-8;
const EVNORM_TOL: f64 = 1e-6;

/// `π_{tr∘ε₁} ⊛ π_{tr∘ε₁}`, built once per product.
pub fn reference_rep(f: &FermiAlgebra) -> &Representation {
    f.reference_rep_cell().get_or_init(|| {
        let g1 = gns(&StateFunctional::normalized_trace(f.left())).expect("trace is a faithful even state");
        let g2 = gns(&StateFunctional::normalized_trace(f.right())).expect("trace is a faithful even state");
        fermi_rep(&g1, &g2, f).expect("trace GNS is covariant")
    })
}

/// `‖x‖_min`.
pub fn min_norm(x: &FermiElement) -> f64 {
    operator_norm(&reference_rep(x.parent()).apply(x.coeffs()))
}

/// Product representations for pairs of sampled extreme even states.
///
/// Pair `k` uses block `k mod b₁` on the left and `(k / b₁) mod b₂` on the
/// right, so the first `b₁b₂` pairs visit every pair of simple blocks of
/// the even subalgebras.
pub struct SampledProductReps {
    left: ExtremeEvenSampler,
    right: ExtremeEvenSampler,
    rng: ChaCha8Rng,
    f: Arc<FermiAlgebra>,
    drawn: usize,
}

impl SampledProductReps {
    pub fn new(f: &Arc<FermiAlgebra>, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let left = ExtremeEvenSampler::new(f.left(), &mut rng)?;
        let right = ExtremeEvenSampler::new(f.right(), &mut rng)?;
        Ok(SampledProductReps { left, right, rng, f: Arc::clone(f), drawn: 0 })
    }

    /// Number of block pairs; sampling is exhaustive after this many draws
    /// when both even subalgebras are commutative.
    pub fn block_pairs(&self) -> usize {
        self.left.num_blocks() * self.right.num_blocks()
    }

    pub fn next_rep(&mut self) -> Result<Representation> {
        let k = self.drawn;
        self.drawn += 1;
        let b1 = k % self.left.num_blocks();
        let b2 = (k / self.left.num_blocks()) % self.right.num_blocks();
        let w1 = self.left.sample_in_block(b1, &mut self.rng)?;
        let w2 = self.right.sample_in_block(b2, &mut self.rng)?;
        fermi_rep(&gns(&w1)?, &gns(&w2)?, &self.f)
    }
}

/// Max over `n` sampled pairs of `‖π_{ω₁}⊛π_{ω₂}(x)‖`.
pub fn min_norm_sampled(x: &FermiElement, n: usize, seed: u64) -> Result<f64> {
    let mut reps = SampledProductReps::new(x.parent(), seed)?;
    let mut best: f64 = 0.0;
    for _ in 0..n {
        best = best.max(operator_norm(&reps.next_rep()?.apply(x.coeffs())));
    }
    Ok(best)
}

/// Certificate for a single element.
#[derive(Clone, Debug, Serialize)]
pub struct NormCertificate {
    pub element: Vec<JsonComplex>,
    pub min_norm: f64,
    pub sampled_sup: f64,
    pub n_samples: usize,
    /// True when `x` is a simple tensor of homogeneous legs and
    /// `‖x‖_min = ‖a‖‖b‖` holds, or a simple tensor of arbitrary legs and
    /// `‖x‖_min ≤ ‖a‖‖b‖` holds.
    pub cross_checked: bool,
    pub compat_residual: f64,
}

pub fn certify_norm(x: &FermiElement, n_samples: usize, seed: u64) -> Result<NormCertificate> {
    let m = min_norm(x);
    let sampled = min_norm_sampled(x, n_samples, seed)?;
    let theta = min_norm(&x.grading());
    let cross_checked = match split_simple_tensor(x) {
        Some((a, b)) => {
            let bound = a.norm() * b.norm();
            let homogeneous = a.grade().parity().is_some() && b.grade().parity().is_some();
            if homogeneous {
                (m - bound).abs() <= CROSS_TOL * bound.max(1e-300)
            } else {
                m <= bound * (1.0 + CROSS_TOL)
            }
        }
        None => false,
    };
    Ok(NormCertificate {
        element: x.coeffs().iter().map(|&z| complex_to_json(z)).collect(),
        min_norm: m,
        sampled_sup: sampled,
        n_samples,
        cross_checked,
        compat_residual: (theta - m).abs() / m.max(1e-300),
    })
}

/// Writes `x = a ⊛ b` when the coefficient matrix has rank one.
pub fn split_simple_tensor(x: &FermiElement) -> Option<(AlgebraElement, AlgebraElement)> {
    let f = x.parent();
    let (d1, d2) = (f.left().dim(), f.right().dim());
    let c = CMatrix::from_fn(d1, d2, |i, j| x.coeffs()[f.index(i, j)]);
    if c.norm() == 0.0 {
        return Some((AlgebraElement::zero(f.left()), AlgebraElement::zero(f.right())));
    }
    let svd = c.clone().svd(true, true);
    let mut sv: Vec<(usize, f64)> = svd.singular_values.iter().cloned().enumerate().collect();
    sv.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let (top, s0) = sv[0];
    if sv.get(1).map(|p| p.1 > 1e-12 * s0).unwrap_or(false) {
        return None;
    }
    let u = svd.u.unwrap();
    let v_t = svd.v_t.unwrap();
    let a: Vec<Complex64> = (0..d1).map(|i| u[(i, top)] * s0).collect();
    let b: Vec<Complex64> = (0..d2).map(|j| v_t[(top, j)]).collect();
    Some((AlgebraElement::from_coeffs(f.left(), a), AlgebraElement::from_coeffs(f.right(), b)))
}

fn random_coeffs(d: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..d)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c64(re, im)
        })
        .collect()
}

pub fn random_fermi_element(f: &Arc<FermiAlgebra>, rng: &mut ChaCha8Rng) -> FermiElement {
    FermiElement::new(f, random_coeffs(f.dim(), rng))
}

pub fn random_element(a: &Arc<GradedAlgebra>, rng: &mut ChaCha8Rng) -> AlgebraElement {
    AlgebraElement::from_coeffs(a, random_coeffs(a.dim(), rng))
}

/// Random element supported on basis elements of one parity.
pub fn random_homogeneous(a: &Arc<GradedAlgebra>, parity: Parity, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let mut coeffs = random_coeffs(a.dim(), rng);
    for (c, p) in coeffs.iter_mut().zip(a.parities()) {
        if *p != parity {
            *c = ZERO;
        }
    }
    AlgebraElement::from_coeffs(a, coeffs)
}

/// `|‖a⊛b‖_min - ‖a‖‖b‖| ≤ 1e-8‖a‖‖b‖` on homogeneous basis pairs and
/// `random` seeded random homogeneous pairs.
pub fn check_cross(f: &Arc<FermiAlgebra>, random: usize, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut worst_label = String::new();
    let mut check = |a: &AlgebraElement, b: &AlgebraElement, label: String| {
        let x = FermiElement::simple(f, a, b).expect("legs from the factors");
        let expected = a.norm() * b.norm();
        let rel = (min_norm(&x) - expected).abs() / expected.max(1e-300);
        if rel > worst {
            worst = rel;
            worst_label = label;
        }
    };
    for i in 0..f.left().dim() {
        for j in 0..f.right().dim() {
            let a = AlgebraElement::basis(f.left(), i);
            let b = AlgebraElement::basis(f.right(), j);
            check(&a, &b, f.label(f.index(i, j)));
        }
    }
    let parities = [Parity::Even, Parity::Odd];
    let left_has = |p: Parity| f.left().parities().contains(&p);
    let right_has = |p: Parity| f.right().parities().contains(&p);
    for k in 0..random {
        let p = parities[k % 2];
        let q = parities[(k / 2) % 2];
        let p = if left_has(p) { p } else { Parity::Even };
        let q = if right_has(q) { q } else { Parity::Even };
        let a = random_homogeneous(f.left(), p, &mut rng);
        let b = random_homogeneous(f.right(), q, &mut rng);
        check(&a, &b, format!("random pair {k}"));
    }
    VerificationReport::from_residual("cross_norm", worst, CROSS_TOL)
        .with("pairs", (f.dim() + random) as u64)
        .with("worst", worst_label)
}

/// `‖(θ₁⊛θ₂)(x)‖_min = ‖x‖_min` on `count` random elements.
pub fn check_compatibility(f: &Arc<FermiAlgebra>, count: usize, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let x = random_fermi_element(f, &mut rng);
        let n = min_norm(&x);
        worst = worst.max((min_norm(&x.grading()) - n).abs() / n.max(1e-300));
    }
    VerificationReport::from_residual("compatibility", worst, COMPAT_TOL).with("elements", count as u64)
}

/// An even faithful state `Tr(ρ·)` with `ρ` positive definite and
/// commuting with `Q`.
pub fn perturbed_trace(a: &Arc<GradedAlgebra>, rng: &mut ChaCha8Rng) -> StateFunctional {
    let n = a.ambient_dim();
    let g = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im)
    });
    let q = a.grading_unitary();
    let mut rho = &g * g.adjoint() + linalg::identity(n);
    rho = (&rho + q * &rho * q).map(|z| z * 0.5);
    let tr = rho.trace();
    StateFunctional::from_density(a, &rho.map(|z| z / tr))
}

/// Norms from two independent faithful product representations agree:
/// the Klein realization (trace pair) and the Fermi product of the GNS
/// representations of perturbed-trace even states.
pub fn check_min_equals_max_finite_dim(f: &Arc<FermiAlgebra>, count: usize, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let build = || -> Result<Representation> {
        let mut r = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let w1 = perturbed_trace(f.left(), &mut r);
        let w2 = perturbed_trace(f.right(), &mut r);
        fermi_rep(&gns(&w1)?, &gns(&w2)?, f)
    };
    let second = match build() {
        Ok(r) => r,
        Err(e) => return VerificationReport::new("min_equals_max", false, f64::INFINITY).with("error", e.to_string()),
    };
    let faithful = crate::gns::faithfulness_check(&second, f.as_graded());
    let mut worst: f64 = 0.0;
    let mut worst_ref: f64 = 0.0;
    for _ in 0..count {
        let x = random_fermi_element(f, &mut rng);
        let klein = operator_norm(&x.klein_realize());
        let other = operator_norm(&second.apply(x.coeffs()));
        let reference = min_norm(&x);
        worst = worst.max((klein - other).abs() / klein.max(1e-300));
        worst_ref = worst_ref.max((klein - reference).abs() / klein.max(1e-300));
    }
    let mut report = VerificationReport::from_residual("min_equals_max", worst.max(worst_ref), COLLAPSE_TOL)
        .with("klein_vs_perturbed", worst)
        .with("klein_vs_trace_gns", worst_ref)
        .with("elements", count as u64)
        .with("second_rep_dim", second.dim() as u64);
    if !faithful {
        report = report.fail_with("second_rep_faithful", false);
    }
    report
}

/// `min_norm_sampled(x, n) ≤ min_norm(x)` for every `n`, with equality to
/// `1e-6` once every pair of blocks is visited when both even parts are
/// commutative.
pub fn check_sandwich(f: &Arc<FermiAlgebra>, count: usize, n: usize, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reps = match SampledProductReps::new(f, seed.wrapping_add(1)) {
        Ok(r) => r,
        Err(e) => return VerificationReport::new("sandwich", false, f64::INFINITY).with("error", e.to_string()),
    };
    let exhaustive = commutative_even_part(f.left()) && commutative_even_part(f.right());
    let draws = if exhaustive { n.max(reps.block_pairs()) } else { n };
    let sampled: Vec<Representation> = match (0..draws).map(|_| reps.next_rep()).collect::<Result<_>>() {
        Ok(v) => v,
        Err(e) => return VerificationReport::new("sandwich", false, f64::INFINITY).with("error", e.to_string()),
    };
    let mut excess: f64 = 0.0;
    let mut gap: f64 = 0.0;
    for _ in 0..count {
        let x = random_fermi_element(f, &mut rng);
        let m = min_norm(&x);
        let s = sampled.iter().map(|r| operator_norm(&r.apply(x.coeffs()))).fold(0.0, f64::max);
        excess = excess.max(s - m);
        gap = gap.max((m - s) / m.max(1e-300));
    }
    let mut report = VerificationReport::from_residual("sandwich", excess.max(0.0), SANDWICH_SLACK)
        .with("max_excess", excess)
        .with("max_relative_gap", gap)
        .with("samples", draws as u64)
        .with("exhaustive", exhaustive);
    if exhaustive && gap > EVNORM_TOL {
        report = report.fail_with("exhaustive_equality", false);
    }
    report
}

fn commutative_even_part(a: &Arc<GradedAlgebra>) -> bool {
    let e = a.even_indices();
    e.iter().all(|&i| e.iter().all(|&j| {
        let ab = &a.basis()[i] * &a.basis()[j];
        let ba = &a.basis()[j] * &a.basis()[i];
        linalg::frob_dist(&ab, &ba) <= 1e-12
    }))
}

/// `‖a‖ = max_ω ‖π_ω(a)‖` over extreme even states, on `count` random `a`.
/// When `𝔄₊` is commutative one state per block exhausts the extreme even
/// states; otherwise `samples` states are drawn.
pub fn check_evnorm(a: &Arc<GradedAlgebra>, count: usize, samples: usize, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = match ExtremeEvenSampler::new(a, &mut rng) {
        Ok(s) => s,
        Err(e) => return VerificationReport::new("evnorm", false, f64::INFINITY).with("error", e.to_string()),
    };
    let exhaustive = commutative_even_part(a);
    let draws = if exhaustive { sampler.num_blocks() } else { samples.max(sampler.num_blocks()) };
    let mut reps = Vec::with_capacity(draws);
    for k in 0..draws {
        let state = sampler.sample_in_block(k % sampler.num_blocks(), &mut rng);
        match state.and_then(|w| gns(&w)) {
            Ok(g) => reps.push(g.representation().clone()),
            Err(e) => return VerificationReport::new("evnorm", false, f64::INFINITY).with("error", e.to_string()),
        }
    }
    let mut worst: f64 = 0.0;
    let mut elements: Vec<AlgebraElement> = vec![AlgebraElement::identity(a)];
    elements.extend((0..count).map(|_| random_element(a, &mut rng)));
    for x in &elements {
        let n = x.norm();
        let sup = reps.iter().map(|r| operator_norm(&r.apply(x.coeffs()))).fold(0.0, f64::max);
        worst = worst.max((n - sup).abs() / n.max(1e-300));
    }
    VerificationReport::from_residual("evnorm", worst, EVNORM_TOL)
        .with("states", draws as u64)
        .with("exhaustive", exhaustive)
        .with("elements", elements.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_commutative, build_named};
    use crate::fermi::build_fermi_product;
    use crate::linalg::{kron, pauli_x, pauli_z, ONE};

    fn m2() -> Arc<GradedAlgebra> {
        build_named("M2").unwrap().algebra
    }

    fn elem(a: &Arc<GradedAlgebra>, m: CMatrix) -> AlgebraElement {
        AlgebraElement::from_matrix(a, m).unwrap()
    }

    #[test]
    fn min_norm_examples() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        assert!((min_norm(&FermiElement::identity(&f)) - 1.0).abs() < 1e-12);
        let sx = elem(&a, pauli_x());
        let sy = elem(&a, crate::linalg::pauli_y());
        let one = AlgebraElement::identity(&a);
        let xy = FermiElement::simple(&f, &sx, &sy).unwrap();
        assert!((min_norm(&xy) - 1.0).abs() < 1e-12);

        // σx⊗1 + 1⊗σx: Klein image σx⊗I + σz⊗σx, eigenvalues ±√2
        let x = FermiElement::simple(&f, &sx, &one).unwrap().add(&FermiElement::simple(&f, &one, &sx).unwrap());
        let klein = kron(&pauli_x(), &linalg::identity(2)) + kron(&pauli_z(), &pauli_x());
        let (vals, _) = linalg::hermitian_eigen(&klein);
        let oracle = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!((oracle - 2f64.sqrt()).abs() < 1e-12);
        assert!((min_norm(&x) - oracle).abs() < 1e-12);
    }

    #[test]
    fn sampled_norm_examples() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        assert!((min_norm_sampled(&FermiElement::identity(&f), 3, 1).unwrap() - 1.0).abs() < 1e-12);
        let xy = FermiElement::basis(&f, 2, 3);
        assert!((min_norm_sampled(&xy, 16, 4).unwrap() - 1.0).abs() < 1e-6);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = random_fermi_element(&f, &mut rng);
        let m = min_norm(&x);
        let mut prev = 0.0;
        for n in [4, 8, 16, 32, 64] {
            let s = min_norm_sampled(&x, n, 21).unwrap();
            assert!(s + 1e-12 >= prev);
            assert!(s <= m + 1e-8);
            prev = s;
        }
    }

    #[test]
    fn cross_examples() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let z2 = elem(&a, pauli_z().map(|z| z * 2.0));
        let x3 = elem(&a, pauli_x().map(|z| z * 3.0));
        assert!((min_norm(&FermiElement::simple(&f, &z2, &x3).unwrap()) - 6.0).abs() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = random_element(&a, &mut rng);
        let one = AlgebraElement::identity(&a);
        let x = FermiElement::simple(&f, &one, &b).unwrap();
        assert!((min_norm(&x) - b.norm()).abs() < 1e-10 * b.norm());
        assert!(check_cross(&f, 20, 1).pass);
    }

    #[test]
    fn compatibility_examples() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let x = FermiElement::basis(&f, 2, 0).add(&FermiElement::basis(&f, 1, 2));
        assert!((min_norm(&x.grading()) - min_norm(&x)).abs() < 1e-12);
        assert!(check_compatibility(&f, 20, 3).pass);
    }

    #[test]
    fn collapse_examples() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        assert!(check_min_equals_max_finite_dim(&f, 20, 5).pass);
        let c = Arc::new(build_commutative(4, &[1, 0, 2, 3]).unwrap());
        let g = build_fermi_product(&c, &a);
        assert!(check_min_equals_max_finite_dim(&g, 20, 6).pass);
        let t = Arc::new(a.with_trivial_grading());
        assert!(check_min_equals_max_finite_dim(&build_fermi_product(&t, &t), 20, 7).pass);
    }

    #[test]
    fn evnorm_examples() {
        let a = m2();
        let r = check_evnorm(&a, 10, 8, 1);
        assert!(r.pass, "{r:?}");
        let c = Arc::new(build_commutative(4, &[1, 0, 2, 3]).unwrap());
        let r = check_evnorm(&c, 10, 8, 2);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.detail("exhaustive").unwrap(), true);
    }

    #[test]
    fn evnorm_on_orbit_state_uses_both_points() {
        // f = (1, -3) on X = {0, 1} with the swap: ‖f‖ = 3 is attained in
        // the 2-dimensional GNS space of ½(δ₀ + δ₁)
        let c = Arc::new(build_commutative(2, &[1, 0]).unwrap());
        let f = elem(&c, linalg::diag(&[ONE, c64(-3.0, 0.0)]));
        let states = crate::states::enumerate_extreme_even_commutative(2, &[1, 0]).unwrap();
        let g = gns(&states[0]).unwrap();
        let n = operator_norm(&g.representation().apply(f.coeffs()));
        assert!((n - 3.0).abs() < 1e-12);
    }

    #[test]
    fn certificate_fields() {
        let a = m2();
        let f = build_fermi_product(&a, &a);
        let xy = FermiElement::basis(&f, 2, 3);
        let cert = certify_norm(&xy, 8, 0).unwrap();
        assert!(cert.cross_checked);
        assert!(cert.sampled_sup <= cert.min_norm + 1e-8);
        assert!(cert.compat_residual < 1e-12);
    }
}
