//! Certification suites run by `verify`. Each check returns a
//! [`VerificationReport`]; names are prefixed with the suite.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{validate_algebra_with, AlgebraSpec, GradedAlgebra, Parity};
use crate::catalog::{self, build_commutative, check_car_composition, check_car_composition_ungraded};
use crate::error::Result;
use crate::fermi::{build_fermi_product, verify_klein_isomorphism, FermiAlgebra, FermiElement};
use crate::gns::{certify_gns_product, gns, normal_state_product_identity};
use crate::linalg::{self, frob_dist, CMatrix};
use crate::norms::{self, min_norm, random_fermi_element};
use crate::report::VerificationReport;
use crate::states::{
    check_positivity_criterion, enumerate_extreme_even_commutative, is_extreme_even, positivity_witness,
    sample_extreme_even, ExtremeEvenSampler, StateFunctional,
};
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Algebra,
    Product,
    States,
    Gns,
    Norms,
    Catalog,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

/// Inputs shared by all suites.
#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Negate one product-table entry of `M2⊛M2` (negative control).
    pub corrupt_sign_table: bool,
    /// User-supplied algebras, validated by the `algebra` suite.
    pub extra: Vec<(String, AlgebraSpec)>,
}

/// Runs the selected suites; reports are sorted by check name.
pub fn run(suite: Suite, opts: &SuiteOptions) -> Vec<VerificationReport> {
    let catalog: Vec<(String, Arc<GradedAlgebra>)> = catalog::catalog()
        .into_iter()
        .map(|e| (e.name, Arc::new(e.algebra.with_tolerances(opts.tolerances))))
        .collect();
    let named = |n: &str| Arc::clone(&catalog.iter().find(|(name, _)| name == n).expect("catalog entry").1);
    let m2 = named("M2");
    let m2xm2 = build_fermi_product(&m2, &m2);
    let m2xm2_used = if opts.corrupt_sign_table { corrupt(&m2xm2) } else { Arc::clone(&m2xm2) };
    let seed = opts.seed;

    let mut out = Vec::new();
    if suite.includes(Suite::Algebra) {
        for (name, a) in &catalog {
            out.push(named_report(format!("algebra.laws.{name}"), algebra_laws(a)));
        }
        for (name, spec) in &opts.extra {
            out.push(named_report(format!("algebra.validate.{name}"), validate_spec(spec, &opts.tolerances)));
        }
    }
    if suite.includes(Suite::Product) {
        let c4 = named("C4");
        let car1 = named("CAR1");
        out.push(named_report("product.klein.M2xM2", verify_klein_isomorphism(&m2xm2_used)));
        out.push(named_report("product.klein.C4xM2", verify_klein_isomorphism(&build_fermi_product(&c4, &m2))));
        out.push(named_report("product.klein.CAR1xCAR1", verify_klein_isomorphism(&build_fermi_product(&car1, &car1))));
        out.push(named_report("product.associativity.M2xM2", check_associativity(&m2xm2_used, 100, seed)));
        out.push(named_report("product.star_law.M2xM2", check_star_law(&m2xm2_used, 100, seed)));
        out.push(named_report("product.cstar_identity.M2xM2", check_cstar_identity(&m2xm2, 50, seed)));
    }
    if suite.includes(Suite::States) {
        out.push(named_report("states.product_sign_table.M2xM2", verify_klein_isomorphism(&m2xm2_used)));
        out.push(named_report(
            "states.positivity_criterion.M2xM2",
            check_positivity_criterion(&m2xm2_used, 200, 1e-6, seed),
        ));
        let plus = plus_state(&m2);
        out.push(named_report("states.positivity_witness.M2xM2", positivity_witness(&plus, &plus, &m2xm2_used)));
        out.push(named_report("states.extreme_even_commutative", check_commutative_extreme_even(5)));
    }
    if suite.includes(Suite::Gns) {
        for (name, a) in catalog.iter().filter(|(_, a)| a.dim() <= 16) {
            out.push(named_report(format!("gns.verify.{name}"), check_gns_states(a, seed)));
        }
        out.push(named_report("gns.product.M2xM2", check_gns_product_exhaustive(&m2xm2)));
        let c4xm2 = build_fermi_product(&named("C4"), &m2);
        out.push(named_report("gns.product.C4xM2", check_gns_product_seeded(&c4xm2, 10, seed)));
        out.push(named_report("gns.normal_state_identity.M2xM2", check_normal_state_identity(&m2xm2, 10, seed)));
    }
    if suite.includes(Suite::Norms) {
        let car1 = named("CAR1");
        let car1xcar1 = build_fermi_product(&car1, &car1);
        let c2 = named("C2_swap");
        for (label, f) in [("M2xM2", &m2xm2), ("CAR1xCAR1", &car1xcar1)] {
            out.push(named_report(format!("norms.cross.{label}"), norms::check_cross(f, 100, seed)));
            out.push(named_report(format!("norms.compatibility.{label}"), norms::check_compatibility(f, 200, seed)));
        }
        out.push(named_report("norms.min_equals_max.M2xM2", norms::check_min_equals_max_finite_dim(&m2xm2, 200, seed)));
        out.push(named_report("norms.sandwich.M2xM2", norms::check_sandwich(&m2xm2, 50, 8, seed)));
        let c2xm2 = build_fermi_product(&c2, &m2);
        out.push(named_report("norms.sandwich.C2_swapxM2", norms::check_sandwich(&c2xm2, 50, 8, seed)));
        for (name, a) in catalog.iter().filter(|(_, a)| a.dim() <= 16) {
            out.push(named_report(format!("norms.evnorm.{name}"), norms::check_evnorm(a, 20, 32, seed)));
        }
    }
    if suite.includes(Suite::Catalog) {
        for (name, a) in &catalog {
            out.push(named_report(format!("catalog.theta_involutive.{name}"), theta_involutive(a)));
        }
        out.push(named_report("catalog.car_even_dimension", check_car_even_dimension()));
        out.push(named_report("catalog.car_composition", car_or_error(check_car_composition(1, 1))));
        let control = car_or_error(check_car_composition_ungraded(1, 1));
        let mut negated = VerificationReport::new("ungraded_control", !control.pass, control.max_residual);
        negated.details = control.details;
        out.push(named_report("catalog.car_composition_ungraded_control", negated));
    }
    out.sort_by(|a, b| a.check.cmp(&b.check));
    out
}

fn named_report(name: impl Into<String>, mut r: VerificationReport) -> VerificationReport {
    r.check = name.into();
    r
}

fn corrupt(f: &Arc<FermiAlgebra>) -> Arc<FermiAlgebra> {
    // first nonzero product whose sign comes from an odd right leg meeting
    // an odd left leg
    let d = f.dim();
    let p = f.as_graded();
    for x in 0..d {
        for y in 0..d {
            let (right_x, left_y) = (f.legs(x).1, f.legs(y).0);
            if f.right().parity(right_x) == Parity::Odd
                && f.left().parity(left_y) == Parity::Odd
                && !p.product_row(x, y).is_empty()
            {
                return f.with_corrupted_sign(x, y);
            }
        }
    }
    Arc::clone(f)
}

fn car_or_error(r: Result<VerificationReport>) -> VerificationReport {
    r.unwrap_or_else(|e| VerificationReport::new("car", false, f64::INFINITY).with("error", e.to_string()))
}

fn plus_state(a: &Arc<GradedAlgebra>) -> StateFunctional {
    let s = 1.0 / 2f64.sqrt();
    StateFunctional::vector_state(a, &linalg::CVector::from_vec(vec![linalg::c64(s, 0.0), linalg::c64(s, 0.0)]))
}

/// Re-validates a spec under the given tolerances.
pub fn validate_spec(spec: &AlgebraSpec, tol: &Tolerances) -> VerificationReport {
    match validate_algebra_with(spec, tol) {
        Ok(a) => algebra_laws(&a).with("dim", a.dim() as u64),
        Err(e) => VerificationReport::new("validate", false, f64::INFINITY).with("error", e.to_string()),
    }
}

/// Structure constants and involution table reproduce the matrix
/// operations, and θ is a *-automorphism.
pub fn algebra_laws(a: &GradedAlgebra) -> VerificationReport {
    let d = a.dim();
    let mut table: f64 = 0.0;
    for i in 0..d {
        let bi = &a.basis()[i];
        table = table.max(frob_dist(&bi.adjoint(), &sparse_matrix(a, a.involution_row(i))));
        for j in 0..d {
            table = table.max(frob_dist(&(bi * &a.basis()[j]), &sparse_matrix(a, a.product_row(i, j))));
        }
    }
    let theta = a.theta_automorphism_residual();
    VerificationReport::from_residual("algebra_laws", table.max(theta), a.tolerances().tau_alg)
        .with("table_residual", table)
        .with("theta_residual", theta)
        .with("dim", d as u64)
}

fn sparse_matrix(a: &GradedAlgebra, row: &[(usize, Complex64)]) -> CMatrix {
    let n = a.ambient_dim();
    let mut m = CMatrix::zeros(n, n);
    for &(k, c) in row {
        m += &a.basis()[k] * c;
    }
    m
}

/// `θ∘θ = id` on coordinates and `Q` is a self-adjoint unitary.
pub fn theta_involutive(a: &GradedAlgebra) -> VerificationReport {
    let mut worst: f64 = 0.0;
    for i in 0..a.dim() {
        let mut e = vec![Complex64::new(0.0, 0.0); a.dim()];
        e[i] = Complex64::new(1.0, 0.0);
        let back = a.theta_coeffs(&a.theta_coeffs(&e));
        worst = worst.max(linalg::max_abs(back.iter().zip(&e).map(|(x, y)| (x - y).norm())));
    }
    let q = a.grading_unitary();
    let n = a.ambient_dim();
    worst = worst.max(frob_dist(q, &q.adjoint())).max(frob_dist(&(q * q), &linalg::identity(n)));
    VerificationReport::from_residual("theta_involutive", worst, a.tolerances().tau_alg)
}

/// `(xy)z = x(yz)` on random elements, relative to `‖x‖‖y‖‖z‖`.
pub fn check_associativity(f: &Arc<FermiAlgebra>, count: usize, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(101));
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let (x, y, z) =
            (random_fermi_element(f, &mut rng), random_fermi_element(f, &mut rng), random_fermi_element(f, &mut rng));
        let scale = x.coeff_norm() * y.coeff_norm() * z.coeff_norm();
        worst = worst.max(x.mul(&y).mul(&z).distance(&x.mul(&y.mul(&z))) / scale);
    }
    VerificationReport::from_residual("associativity", worst, 1e-12).with("triples", count as u64)
}

/// `(xy)* = y*x*` and `x** = x` on random elements.
pub fn check_star_law(f: &Arc<FermiAlgebra>, count: usize, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(202));
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let (x, y) = (random_fermi_element(f, &mut rng), random_fermi_element(f, &mut rng));
        let scale = x.coeff_norm() * y.coeff_norm();
        worst = worst.max(x.mul(&y).adjoint().distance(&y.adjoint().mul(&x.adjoint())) / scale);
        worst = worst.max(x.adjoint().adjoint().distance(&x) / x.coeff_norm());
    }
    VerificationReport::from_residual("star_law", worst, 1e-12).with("pairs", count as u64)
}

/// `‖x*x‖_min = ‖x‖²_min`.
pub fn check_cstar_identity(f: &Arc<FermiAlgebra>, count: usize, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(303));
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let x = random_fermi_element(f, &mut rng);
        let n = min_norm(&x);
        worst = worst.max((min_norm(&x.adjoint().mul(&x)) - n * n).abs() / (n * n));
    }
    VerificationReport::from_residual("cstar_identity", worst, 1e-10).with("elements", count as u64)
}

/// All involutions of `{0..n}` as permutation vectors.
pub fn involutions(n: usize) -> Vec<Vec<usize>> {
    fn extend(perm: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        let Some(x) = perm.iter().position(|p| p.is_none()) else {
            out.push(perm.iter().map(|p| p.unwrap()).collect());
            return;
        };
        perm[x] = Some(x);
        extend(perm, out);
        for y in x + 1..perm.len() {
            if perm[y].is_none() {
                perm[x] = Some(y);
                perm[y] = Some(x);
                extend(perm, out);
                perm[y] = None;
            }
        }
        perm[x] = None;
    }
    let mut out = Vec::new();
    extend(&mut vec![None; n], &mut out);
    out
}

/// For every involution of every `X` with `|X| ≤ max_size`: the enumerated
/// extreme even states are exactly the orbit averages, each passes
/// `is_extreme_even`, and midpoints of two of them are rejected.
pub fn check_commutative_extreme_even(max_size: usize) -> VerificationReport {
    let mut cases = 0u64;
    let mut failures: Vec<String> = Vec::new();
    let mut worst: f64 = 0.0;
    for n in 1..=max_size {
        for perm in involutions(n) {
            cases += 1;
            let mut fail = |why: &str| failures.push(format!("|X|={n} perm={perm:?}: {why}"));
            let a = match build_commutative(n, &perm) {
                Ok(a) => Arc::new(a),
                Err(e) => {
                    fail(&e.to_string());
                    continue;
                }
            };
            let states = match enumerate_extreme_even_commutative(n, &perm) {
                Ok(s) => s,
                Err(e) => {
                    fail(&e.to_string());
                    continue;
                }
            };
            let mut orbits: Vec<Vec<usize>> = Vec::new();
            for (x, &y) in perm.iter().enumerate() {
                if y >= x {
                    orbits.push(if y == x { vec![x] } else { vec![x, y] });
                }
            }
            if states.len() != orbits.len() {
                fail(&format!("{} states for {} orbits", states.len(), orbits.len()));
                continue;
            }
            let expected: Vec<StateFunctional> = orbits
                .iter()
                .map(|o| {
                    let w = 1.0 / o.len() as f64;
                    let rho = CMatrix::from_fn(n, n, |r, c| {
                        if r == c && o.contains(&r) {
                            Complex64::new(w, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    });
                    StateFunctional::from_density(&a, &rho)
                })
                .collect();
            for e in &expected {
                let best = states.iter().map(|s| s.distance(e)).fold(f64::INFINITY, f64::min);
                worst = worst.max(best);
                if best > 1e-12 {
                    fail("orbit average missing from enumeration");
                }
            }
            for s in &states {
                if !matches!(is_extreme_even(s), Ok(true)) {
                    fail("enumerated state not extreme");
                }
            }
            for k in 0..expected.len().saturating_sub(1) {
                let mid = expected[k].mix(&expected[k + 1], 0.5);
                if !matches!(is_extreme_even(&mid), Ok(false)) {
                    fail("midpoint accepted as extreme");
                }
            }
        }
    }
    let mut r = VerificationReport::new("extreme_even_commutative", failures.is_empty(), worst)
        .with("cases", cases)
        .with("max_size", max_size as u64);
    if !failures.is_empty() {
        r = r.with("failures", failures.into_iter().take(10).collect::<Vec<_>>());
    }
    r
}

/// GNS of the normalized trace and of a sampled extreme even state.
pub fn check_gns_states(a: &Arc<GradedAlgebra>, seed: u64) -> VerificationReport {
    let mut parts = Vec::new();
    let mut states = vec![StateFunctional::normalized_trace(a)];
    match sample_extreme_even(a, 1, seed) {
        Ok(s) => states.extend(s),
        Err(e) => parts.push(VerificationReport::new("sample", false, f64::INFINITY).with("error", e.to_string())),
    }
    for (k, w) in states.iter().enumerate() {
        let r = match gns(w) {
            Ok(g) => g.verify(),
            Err(e) => VerificationReport::new("gns", false, f64::INFINITY).with("error", e.to_string()),
        };
        parts.push(named_report(format!("state{k}"), r));
    }
    VerificationReport::combine("gns_states", &parts)
}

fn combine_products(name: &str, pairs: &[(StateFunctional, StateFunctional)], f: &FermiAlgebra) -> VerificationReport {
    let parts: Vec<VerificationReport> = pairs
        .iter()
        .enumerate()
        .map(|(k, (w1, w2))| named_report(format!("pair{k:02}"), certify_gns_product(w1, w2, f)))
        .collect();
    VerificationReport::combine(name, &parts).with("pairs", pairs.len() as u64)
}

/// `certify_gns_product` on every pair of extreme even states, one per
/// block of each even part; exhaustive when the blocks are one-dimensional.
pub fn check_gns_product_exhaustive(f: &Arc<FermiAlgebra>) -> VerificationReport {
    let per_block = |a: &Arc<GradedAlgebra>| -> Result<Vec<StateFunctional>> {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = ExtremeEvenSampler::new(a, &mut rng)?;
        (0..s.num_blocks()).map(|b| s.sample_in_block(b, &mut rng)).collect()
    };
    match (per_block(f.left()), per_block(f.right())) {
        (Ok(l), Ok(r)) => {
            let pairs: Vec<_> = l.iter().flat_map(|a| r.iter().map(move |b| (a.clone(), b.clone()))).collect();
            combine_products("gns_product_exhaustive", &pairs, f)
        }
        (Err(e), _) | (_, Err(e)) => {
            VerificationReport::new("gns_product_exhaustive", false, f64::INFINITY).with("error", e.to_string())
        }
    }
}

/// `certify_gns_product` on `count` seeded pairs of extreme even states.
pub fn check_gns_product_seeded(f: &Arc<FermiAlgebra>, count: usize, seed: u64) -> VerificationReport {
    match (sample_extreme_even(f.left(), count, seed), sample_extreme_even(f.right(), count, seed.wrapping_add(1))) {
        (Ok(l), Ok(r)) => {
            let pairs: Vec<_> = l.into_iter().zip(r).collect();
            combine_products("gns_product_seeded", &pairs, f)
        }
        (Err(e), _) | (_, Err(e)) => {
            VerificationReport::new("gns_product_seeded", false, f64::INFINITY).with("error", e.to_string())
        }
    }
}

/// `normal_state_product_identity` for `count` random even density
/// matrices on the GNS spaces of the normalized traces.
pub fn check_normal_state_identity(f: &Arc<FermiAlgebra>, count: usize, seed: u64) -> VerificationReport {
    let (g1, g2) = match (
        gns(&StateFunctional::normalized_trace(f.left())),
        gns(&StateFunctional::normalized_trace(f.right())),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            return VerificationReport::new("normal_state_identity", false, f64::INFINITY).with("error", e.to_string())
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(404));
    let mut density = |v: &CMatrix| {
        let n = v.nrows();
        let g = CMatrix::from_fn(n, n, |_, _| {
            use rand_distr::{Distribution, StandardNormal};
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        });
        let t = &g * g.adjoint();
        let t = (&t + v * &t * v).map(|z| z * 0.5);
        let tr = t.trace();
        t.map(|z| z / tr)
    };
    let (v1, v2) = (g1.grading_op().cloned().unwrap(), g2.grading_op().cloned().unwrap());
    let parts: Vec<VerificationReport> = (0..count)
        .map(|k| {
            let (t1, t2) = (density(&v1), density(&v2));
            named_report(format!("pair{k:02}"), normal_state_product_identity(&t1, &t2, f, &g1, &g2))
        })
        .collect();
    VerificationReport::combine("normal_state_identity", &parts).with("pairs", count as u64)
}

/// The even part of `CAR(k)` has dimension `2^{2k-1}`.
pub fn check_car_even_dimension() -> VerificationReport {
    let mut worst = 0.0;
    let mut r = VerificationReport::new("car_even_dimension", true, 0.0);
    for k in 1..=3 {
        match catalog::build_car(k) {
            Ok(car) => {
                let even = car.algebra.even_indices().len();
                let expected = 1usize << (2 * k - 1);
                if even != expected {
                    worst = 1.0;
                    r = r.fail_with(&format!("k{k}"), format!("{even} != {expected}"));
                }
            }
            Err(e) => r = r.fail_with(&format!("k{k}"), e.to_string()),
        }
    }
    r.max_residual = worst;
    r
}

/// A single Fermi-product element from its coordinates.
pub fn element_from_coeffs(f: &Arc<FermiAlgebra>, coeffs: Vec<Complex64>) -> Option<FermiElement> {
    (coeffs.len() == f.dim()).then(|| FermiElement::new(f, coeffs))
}

/// `M2`, `M2_trivial`, ... joined by `x`, e.g. `M2xM2`.
pub fn named_product(name: &str) -> Result<Arc<FermiAlgebra>> {
    let (l, r) = name
        .split_once('x')
        .ok_or_else(|| crate::error::Error::Shape(format!("product name {name} is not of the form AxB")))?;
    Ok(build_fermi_product(&catalog::build_named(l)?.algebra, &catalog::build_named(r)?.algebra))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| involutions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 10, 26, 76]);
    }

    #[test]
    fn corrupted_table_fails_product_checks() {
        let opts = SuiteOptions { corrupt_sign_table: true, ..SuiteOptions::default() };
        let reports = run(Suite::States, &opts);
        let table = reports.iter().find(|r| r.check == "states.product_sign_table.M2xM2").unwrap();
        assert!(!table.pass);
    }
}
