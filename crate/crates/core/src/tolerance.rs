use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds. Field names match the CLI override keys.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Closure, identity and homogeneity residuals.
    pub tau_alg: f64,
    /// Relative cutoff for rank decisions.
    pub tau_rank: f64,
    /// Positivity and evenness of functionals.
    pub tau_state: f64,
    /// GNS reconstruction and intertwining residuals.
    pub tau_gns: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tau_alg: 1e-9, tau_rank: 1e-10, tau_state: 1e-9, tau_gns: 1e-9 }
    }
}

impl Tolerances {
    /// Applies a named override; unknown names are rejected.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Shape(format!("tolerance {name} must be positive, got {value}")));
        }
        match name {
            "tau_alg" => self.tau_alg = value,
            "tau_rank" => self.tau_rank = value,
            "tau_state" => self.tau_state = value,
            "tau_gns" => self.tau_gns = value,
            _ => return Err(Error::Shape(format!("unknown tolerance {name}"))),
        }
        Ok(())
    }
}
