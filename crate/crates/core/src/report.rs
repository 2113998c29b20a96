use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Pass/fail record of one certified property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub pass: bool,
    pub max_residual: f64,
    pub details: Map<String, Value>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, pass: bool, max_residual: f64) -> Self {
        VerificationReport { check: check.into(), pass, max_residual, details: Map::new() }
    }

    /// Passing iff `max_residual <= threshold`; the threshold is recorded.
    pub fn from_residual(check: impl Into<String>, max_residual: f64, threshold: f64) -> Self {
        let pass = max_residual <= threshold;
        VerificationReport::new(check, pass, max_residual).with("threshold", threshold)
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn fail_with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.pass = false;
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn detail(&self, key: &str) -> Option<&Value> {
        self.details.get(key)
    }

    /// Conjunction of several reports under a new name.
    pub fn combine(check: impl Into<String>, parts: &[VerificationReport]) -> Self {
        let pass = parts.iter().all(|r| r.pass);
        let residual = parts.iter().map(|r| r.max_residual).fold(0.0, f64::max);
        let mut out = VerificationReport::new(check, pass, residual);
        for p in parts {
            out.details.insert(p.check.clone(), serde_json::to_value(p).unwrap_or(Value::Null));
        }
        out
    }
}
