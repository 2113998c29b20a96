//! Command-line front end.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{validate_algebra_with, GradedAlgebra};
use crate::catalog::{build_named, catalog};
use crate::error::{Error, Result};
use crate::fermi::{build_fermi_product, verify_klein_isomorphism};
use crate::gns::gns;
use crate::io::{complex_to_json, matrix_to_json, read_algebra_spec, read_json, AlgebraSpecJson, JsonComplex, StateJson};
use crate::norms::certify_norm;
use crate::report::VerificationReport;
use crate::states::StateFunctional;
use crate::suites::{self, Suite, SuiteOptions};
use crate::tolerance::Tolerances;

#[derive(Parser, Debug)]
#[command(name = "gradedstar", version, about = "Z2-graded finite-dimensional C*-algebra toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate an algebra spec and print its report.
    Validate {
        spec: PathBuf,
        /// Tolerance override `name=value` (tau_alg, tau_rank, tau_state, tau_gns).
        #[arg(long = "tolerance", value_name = "NAME=VALUE")]
        tolerances: Vec<String>,
    },
    /// List or build catalog algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Fermi product of two specs, printed as a spec in its Klein realization.
    Product { left: PathBuf, right: PathBuf },
    /// GNS data of a state on an algebra.
    Gns { spec: PathBuf, state: PathBuf },
    /// Norm certificate of one element of a catalog product.
    Norms {
        /// Coordinates on the product basis, as `[[re, im], ...]`.
        #[arg(long)]
        element: String,
        /// Catalog product such as `M2xM2`.
        #[arg(long, default_value = "M2xM2")]
        product: String,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, env = "GRADEDSTAR_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Run certification suites; prints JSON lines and a summary.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, env = "GRADEDSTAR_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long = "tolerance", value_name = "NAME=VALUE")]
        tolerances: Vec<String>,
        /// Additional algebra specs to validate.
        #[arg(long = "spec")]
        specs: Vec<PathBuf>,
        /// Negate one sign in the M2⊛M2 product table (negative control).
        #[arg(long)]
        corrupt_sign_table: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List,
    Build { name: String },
}

/// Settings of a `verify` run.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
    pub suite: Suite,
    pub corrupt_sign_table: bool,
    pub specs: Vec<PathBuf>,
}

impl RunConfig {
    pub fn tolerances(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        for (k, v) in &self.tolerance_overrides {
            t.set(k, *v)?;
        }
        Ok(t)
    }
}

pub fn parse_overrides(items: &[String]) -> Result<BTreeMap<String, f64>> {
    items
        .iter()
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Shape(format!("tolerance override {item:?} is not NAME=VALUE")))?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Shape(format!("bad tolerance value in {item:?}")))?;
            let k = k.trim().trim_start_matches("τ_").trim_start_matches("tau_");
            Ok((format!("tau_{k}"), v))
        })
        .collect()
}

/// Runs the suites, writes JSON lines (reports sorted by name, then a
/// summary object) and returns the exit code.
pub fn run_suite(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let tolerances = config.tolerances()?;
    let extra = config
        .specs
        .iter()
        .map(|p| Ok((p.display().to_string(), read_algebra_spec(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let opts = SuiteOptions { seed: config.seed, tolerances, corrupt_sign_table: config.corrupt_sign_table, extra };
    let reports = suites::run(config.suite, &opts);
    let mut text = String::new();
    for r in &reports {
        text.push_str(&serde_json::to_string(r)?);
        text.push('\n');
    }
    text.push_str(&serde_json::to_string(&summary(&reports, config))?);
    text.push('\n');
    match &config.output_path {
        Some(path) => std::fs::write(path, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn summary(reports: &[VerificationReport], config: &RunConfig) -> Value {
    let failing: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    json!({
        "summary": {
            "suite": config.suite,
            "seed": config.seed,
            "total": reports.len(),
            "passed": reports.len() - failing.len(),
            "failed": failing.len(),
            "failing": failing,
        }
    })
}

fn print_json(out: &mut dyn Write, v: &impl Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn algebra_summary(a: &GradedAlgebra) -> Value {
    json!({
        "dim": a.dim(),
        "ambient_dim": a.ambient_dim(),
        "even_dim": a.even_indices().len(),
        "odd_dim": a.odd_indices().len(),
    })
}

/// Executes a parsed command; returns the process exit code.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Validate { spec, tolerances } => {
            let mut tol = Tolerances::default();
            for (k, v) in parse_overrides(&tolerances)? {
                tol.set(&k, v)?;
            }
            let spec = read_algebra_spec(&spec)?;
            let a = validate_algebra_with(&spec, &tol)?;
            let report = suites::algebra_laws(&a);
            let pass = report.pass;
            print_json(out, &json!({ "algebra": algebra_summary(&a), "report": report }))?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Catalog { action: CatalogAction::List } => {
            for e in catalog() {
                let line = json!({ "name": e.name, "description": e.description, "algebra": algebra_summary(&e.algebra) });
                writeln!(out, "{}", serde_json::to_string(&line)?)?;
            }
            Ok(0)
        }
        Command::Catalog { action: CatalogAction::Build { name } } => {
            let e = build_named(&name)?;
            print_json(out, &AlgebraSpecJson::from_algebra(&e.algebra))?;
            Ok(0)
        }
        Command::Product { left, right } => {
            let a = Arc::new(validate_algebra_with(&read_algebra_spec(&left)?, &Tolerances::default())?);
            let b = Arc::new(validate_algebra_with(&read_algebra_spec(&right)?, &Tolerances::default())?);
            let f = build_fermi_product(&a, &b);
            let report = verify_klein_isomorphism(&f);
            let pass = report.pass;
            let labels: Vec<String> = (0..f.dim()).map(|k| f.label(k)).collect();
            print_json(
                out,
                &json!({
                    "spec": AlgebraSpecJson::from_algebra(f.as_graded()),
                    "labels": labels,
                    "report": report,
                }),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Gns { spec, state } => {
            let a = Arc::new(validate_algebra_with(&read_algebra_spec(&spec)?, &Tolerances::default())?);
            let s: StateJson = read_json(&state)?;
            let values = s.values();
            if values.len() != a.dim() {
                return Err(Error::Shape(format!("state has {} values for an algebra of dimension {}", values.len(), a.dim())));
            }
            let g = gns(&StateFunctional::new(&a, values))?;
            let report = g.verify();
            let pass = report.pass;
            let cyclic: Vec<JsonComplex> = g.cyclic_vector().iter().map(|&z| complex_to_json(z)).collect();
            print_json(
                out,
                &json!({
                    "dim": g.dim(),
                    "rep": g.rep().iter().map(matrix_to_json).collect::<Vec<_>>(),
                    "cyclic_vector": cyclic,
                    "grading_op": g.grading_op().map(matrix_to_json),
                    "report": report,
                }),
            )?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Norms { element, product, samples, seed } => {
            let f = suites::named_product(&product)?;
            let coeffs: Vec<JsonComplex> = serde_json::from_str(&element)?;
            let x = suites::element_from_coeffs(&f, coeffs.iter().map(crate::io::complex_from_json).collect())
                .ok_or_else(|| Error::Shape(format!("element needs {} coordinates, got {}", f.dim(), coeffs.len())))?;
            print_json(out, &certify_norm(&x, samples, seed)?)?;
            Ok(0)
        }
        Command::Verify { suite, seed, output, tolerances, specs, corrupt_sign_table } => {
            let config = RunConfig {
                seed,
                tolerance_overrides: parse_overrides(&tolerances)?,
                output_path: output,
                suite,
                corrupt_sign_table,
                specs,
            };
            run_suite(&config, out)
        }
    }
}
