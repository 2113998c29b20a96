//! JSON file formats.
//!
//! Complex scalars are `[re, im]`, matrices are row-major arrays of rows.
//!
//! ```json
//! { "ambient_dim": 2,
//!   "basis": [[[[1,0],[0,0]],[[0,0],[1,0]]], ...],
//!   "grading_unitary": [[[1,0],[0,0]],[[0,0],[-1,0]]] }
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, GradedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix};

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

pub fn complex_to_json(z: Complex64) -> JsonComplex {
    [z.re, z.im]
}

pub fn complex_from_json(z: &JsonComplex) -> Complex64 {
    c64(z[0], z[1])
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| complex_to_json(m[(r, c)])).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<CMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Shape("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |r, c| complex_from_json(&rows[r][c])))
}

/// On-disk algebra description.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraSpecJson {
    pub ambient_dim: usize,
    pub basis: Vec<JsonMatrix>,
    pub grading_unitary: JsonMatrix,
}

impl AlgebraSpecJson {
    pub fn to_spec(&self) -> Result<AlgebraSpec> {
        Ok(AlgebraSpec {
            ambient_dim: self.ambient_dim,
            basis: self.basis.iter().map(matrix_from_json).collect::<Result<_>>()?,
            grading_unitary: matrix_from_json(&self.grading_unitary)?,
        })
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Self {
        AlgebraSpecJson {
            ambient_dim: spec.ambient_dim,
            basis: spec.basis.iter().map(matrix_to_json).collect(),
            grading_unitary: matrix_to_json(&spec.grading_unitary),
        }
    }

    /// Spec of a validated algebra, listing its homogeneous basis.
    pub fn from_algebra(a: &GradedAlgebra) -> Self {
        AlgebraSpecJson {
            ambient_dim: a.ambient_dim(),
            basis: a.basis().iter().map(matrix_to_json).collect(),
            grading_unitary: matrix_to_json(a.grading_unitary()),
        }
    }
}

/// On-disk state: values on the canonical (homogeneous) basis of the
/// referenced algebra.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StateJson {
    pub algebra_ref: serde_json::Value,
    pub values: Vec<JsonComplex>,
}

impl StateJson {
    pub fn values(&self) -> Vec<Complex64> {
        self.values.iter().map(complex_from_json).collect()
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_algebra_spec(path: impl AsRef<Path>) -> Result<AlgebraSpec> {
    read_json::<AlgebraSpecJson>(path)?.to_spec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frob_dist, pauli_y};

    #[test]
    fn matrix_json_is_row_major() {
        let y = pauli_y();
        let j = matrix_to_json(&y);
        assert_eq!(j[0][1], [0.0, -1.0]);
        assert_eq!(j[1][0], [0.0, 1.0]);
        assert!(frob_dist(&matrix_from_json(&j).unwrap(), &y) == 0.0);
    }

    #[test]
    fn spec_json_parses() {
        let text = r#"{"ambient_dim": 2,
            "basis": [[[[1,0],[0,0]],[[0,0],[1,0]]]],
            "grading_unitary": [[[1,0],[0,0]],[[0,0],[-1,0]]]}"#;
        let spec: AlgebraSpecJson = serde_json::from_str(text).unwrap();
        let spec = spec.to_spec().unwrap();
        assert_eq!(spec.basis.len(), 1);
        assert_eq!(spec.grading_unitary[(1, 1)], c64(-1.0, 0.0));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let bad: JsonMatrix = vec![vec![[1.0, 0.0]], vec![]];
        assert!(matrix_from_json(&bad).is_err());
    }
}
