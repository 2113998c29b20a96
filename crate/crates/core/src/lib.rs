//! Z₂-graded finite-dimensional C*-algebras: Fermi tensor products,
//! covariant GNS representations, the spatial norm and a catalog of
//! standard examples.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod fermi;
pub mod gns;
pub mod io;
pub mod linalg;
pub mod norms;
pub mod report;
pub mod states;
pub mod suites;
pub mod tolerance;

pub use algebra::{validate_algebra, AlgebraElement, AlgebraSpec, Grade, GradedAlgebra, Parity};
pub use error::{Error, Result};
pub use fermi::{build_fermi_product, FermiAlgebra, FermiElement};
pub use gns::{gns, GnsData, Representation};
pub use report::VerificationReport;
pub use states::StateFunctional;
pub use tolerance::Tolerances;
