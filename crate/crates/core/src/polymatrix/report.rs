use std::fmt;

use serde_json::{json, Value};

use super::PolyMatrix;

/// Outcome of an exact check, with the residual matrix when one applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub check: String,
    pub passed: bool,
    /// Positions of nonzero residual entries.
    pub offending: Vec<(usize, usize)>,
    pub residual: Option<PolyMatrix>,
    /// Human-readable violations for checks without a single residual.
    pub violations: Vec<String>,
}

impl VerificationReport {
    pub fn from_residual(check: &str, residual: PolyMatrix) -> VerificationReport {
        let mut offending = Vec::new();
        for i in 0..residual.rows() {
            for j in 0..residual.cols() {
                if !residual.get(i, j).is_zero() {
                    offending.push((i, j));
                }
            }
        }
        VerificationReport {
            check: check.to_string(),
            passed: offending.is_empty(),
            offending,
            residual: Some(residual),
            violations: Vec::new(),
        }
    }

    pub fn from_violations(check: &str, violations: Vec<String>) -> VerificationReport {
        VerificationReport {
            check: check.to_string(),
            passed: violations.is_empty(),
            offending: Vec::new(),
            residual: None,
            violations,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "check": self.check,
            "passed": self.passed,
        });
        if !self.passed {
            if let Some(r) = &self.residual {
                v["residual"] = r.to_json();
                v["offending"] = json!(self.offending);
            }
            if !self.violations.is_empty() {
                v["violations"] = json!(self.violations);
            }
        }
        v
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, if self.passed { "ok" } else { "FAILED" })?;
        if self.passed {
            return Ok(());
        }
        if let Some(r) = &self.residual {
            for &(i, j) in &self.offending {
                write!(f, "\n  residual ({i},{j}) = {}", r.get(i, j))?;
            }
        }
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}
