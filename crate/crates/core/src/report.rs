//! Verified-inequality reports.

use serde::{Deserialize, Serialize};

/// One verified inequality instance: left side, right side, inputs, verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// serialized parameter record, e.g. "m=4 n=64 seed=1"
    pub inputs: String,
    pub pass: bool,
    /// rhs - lhs
    pub margin: f64,
}

impl BoundReport {
    /// Build a report for `lhs <= rhs + tolerance`.
    pub fn check(name: &str, lhs: f64, rhs: f64, tolerance: f64, inputs: String) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            inputs,
            pass: lhs <= rhs + tolerance,
            margin: rhs - lhs,
        }
    }
}
