//! Acceptance criteria. Prints one PASS/FAIL line per criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use gradedstar::algebra::{AlgebraElement, GradedAlgebra};
use gradedstar::catalog::{build_named, catalog, check_car_composition, check_car_composition_ungraded};
use gradedstar::fermi::{build_fermi_product, verify_klein_isomorphism, FermiAlgebra, FermiElement};
use gradedstar::linalg::{c64, pauli_x, CVector, I};
use gradedstar::norms;
use gradedstar::report::VerificationReport;
use gradedstar::states::{check_positivity_criterion, is_positive, positivity_witness, product_functional, StateFunctional};
use gradedstar::suites;

const SEED: u64 = 20240601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(reports: &[VerificationReport], bound: f64) -> Outcome {
    let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let failing: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    let pass = failing.is_empty() && worst <= bound;
    let detail = if failing.is_empty() {
        format!("max residual {worst:.2e} (bound {bound:.0e})")
    } else {
        format!("max residual {worst:.2e} (bound {bound:.0e}); failing: {}", failing.join(", "))
    };
    Outcome { pass, detail }
}

fn named(name: &str) -> Arc<GradedAlgebra> {
    build_named(name).unwrap().algebra
}

fn product(l: &str, r: &str) -> Arc<FermiAlgebra> {
    build_fermi_product(&named(l), &named(r))
}

fn sign_rule_oracle() -> Outcome {
    let reports = [verify_klein_isomorphism(&product("M2", "M2")), verify_klein_isomorphism(&product("C4", "M2"))];
    outcome(&reports, 1e-12)
}

fn positivity_criterion() -> Outcome {
    let m2 = named("M2");
    let f = build_fermi_product(&m2, &m2);
    let criterion = check_positivity_criterion(&f, 200, 1e-6, SEED);
    let s = 1.0 / 2f64.sqrt();
    let plus = StateFunctional::vector_state(&m2, &CVector::from_vec(vec![c64(s, 0.0), c64(s, 0.0)]));
    let witness = positivity_witness(&plus, &plus, &f);
    // h = i(σx⊗σx) is self-adjoint, yet ω×ω(h) = i
    let sx = AlgebraElement::from_matrix(&m2, pauli_x()).unwrap();
    let h = FermiElement::simple(&f, &sx, &sx).unwrap().scale(I);
    let ww = product_functional(&plus, &plus, &f);
    let value = ww.eval_coeffs(h.coeffs());
    let h_ok = h.adjoint().distance(&h) < 1e-14 && (value - I).norm() < 1e-12 && !is_positive(&ww).positive;
    let mut o = outcome(std::slice::from_ref(&criterion), f64::INFINITY);
    o.pass &= witness.pass && h_ok;
    o.detail = format!(
        "{} mismatches over 200 pairs, weakest violation {:.3e} (margin 1e-6); ω×ω(i σx⊗σx) = {:.3}{:+.3}i",
        criterion.detail("mismatches").unwrap(),
        criterion.detail("weakest_violation").and_then(|v| v.as_f64()).unwrap_or(f64::NAN),
        value.re,
        value.im
    );
    o
}

fn gns_product_theorem() -> Outcome {
    let reports = [
        suites::check_gns_product_exhaustive(&product("M2", "M2")),
        suites::check_gns_product_seeded(&product("C4", "M2"), 10, SEED),
    ];
    let mut o = outcome(&reports, 1e-9);
    o.detail = format!("{} + {} pairs; {}", reports[0].detail("pairs").unwrap(), reports[1].detail("pairs").unwrap(), o.detail);
    o
}

fn commutative_extreme_even() -> Outcome {
    let r = suites::check_commutative_extreme_even(8);
    let mut o = outcome(std::slice::from_ref(&r), 1e-12);
    o.detail = format!("{} involutions with |X| ≤ 8; {}", r.detail("cases").unwrap(), o.detail);
    o
}

fn cross_norm() -> Outcome {
    outcome(&[norms::check_cross(&product("M2", "M2"), 100, SEED), norms::check_cross(&product("CAR1", "CAR1"), 100, SEED)], 1e-8)
}

fn compatibility() -> Outcome {
    outcome(
        &[
            norms::check_compatibility(&product("M2", "M2"), 200, SEED),
            norms::check_compatibility(&product("CAR1", "CAR1"), 200, SEED),
        ],
        1e-8,
    )
}

fn norm_collapse() -> Outcome {
    let collapse = norms::check_min_equals_max_finite_dim(&product("M2", "M2"), 200, SEED);
    let sandwich = [
        norms::check_sandwich(&product("M2", "M2"), 50, 8, SEED),
        norms::check_sandwich(&product("C2_swap", "M2"), 50, 8, SEED),
        norms::check_sandwich(&product("C4", "C2_swap"), 50, 8, SEED),
    ];
    let a = outcome(&[collapse], 1e-8);
    let b = outcome(&sandwich, 1e-6);
    Outcome { pass: a.pass && b.pass, detail: format!("two representations: {}; sampled sup: {}", a.detail, b.detail) }
}

fn even_state_norm_recovery() -> Outcome {
    let reports: Vec<VerificationReport> = catalog()
        .into_iter()
        .filter(|e| e.algebra.dim() <= 16)
        .map(|e| {
            let mut r = norms::check_evnorm(&e.algebra, 20, 32, SEED);
            r.check = e.name;
            r
        })
        .collect();
    let mut o = outcome(&reports, 1e-6);
    o.detail = format!("{} algebras; {}", reports.len(), o.detail);
    o
}

fn car_composition() -> Outcome {
    let graded = check_car_composition(1, 1).unwrap();
    let ungraded = check_car_composition_ungraded(1, 1).unwrap();
    let relations = graded.detail("relations").and_then(|v| v.as_u64()).unwrap_or(0);
    let mut o = outcome(std::slice::from_ref(&graded), 1e-10);
    o.pass &= !ungraded.pass;
    o.detail = format!(
        "{relations} ordered anticommutators, generated dim {}; {}; ungraded control {}",
        graded.detail("generated_dim").unwrap(),
        o.detail,
        if ungraded.pass { "passed (unexpected)" } else { "fails as expected" }
    );
    o
}

fn normal_state_identity() -> Outcome {
    outcome(&[suites::check_normal_state_identity(&product("M2", "M2"), 10, SEED)], 1e-9)
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 10] = [
        ("1 sign-rule oracle equivalence", sign_rule_oracle, Duration::from_secs(1)),
        ("2 positivity criterion", positivity_criterion, Duration::from_secs(5)),
        ("3 GNS product theorem", gns_product_theorem, Duration::from_secs(10)),
        ("4 extreme even states of C(X)", commutative_extreme_even, Duration::from_secs(5)),
        ("5 cross-norm", cross_norm, Duration::from_secs(5)),
        ("6 compatibility", compatibility, Duration::from_secs(5)),
        ("7 norm collapse", norm_collapse, Duration::from_secs(10)),
        ("8 even-state norm recovery", even_state_norm_recovery, Duration::from_secs(10)),
        ("9 CAR composition", car_composition, Duration::from_secs(2)),
        ("10 normal state product identity", normal_state_identity, Duration::from_secs(2)),
    ];
    let mut failed = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= budget;
        println!(
            "{} criterion {name}: {} [{:.2}s / budget {}s]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !pass {
            failed.push(name);
        }
    }
    println!("{} of 10 criteria passed", 10 - failed.len());
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
