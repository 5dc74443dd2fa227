use serde::{Deserialize, Serialize};

use crate::field_data::FieldId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub value: f64,
}

/// Outcome of one numeric identity check. `passed` is true exactly when
/// `residual <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub field: Option<FieldId>,
    pub parameters: Vec<Parameter>,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>, field: Option<FieldId>, residual: f64, tolerance: f64) -> Self {
        // NaN residuals fail
        let passed = residual <= tolerance;
        Self {
            check_name: check_name.into(),
            field,
            parameters: Vec::new(),
            residual,
            tolerance,
            passed,
        }
    }

    pub fn param(mut self, name: impl Into<String>, value: f64) -> Self {
        self.parameters.push(Parameter {
            name: name.into(),
            value,
        });
        self
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.iter().find(|p| p.name == name).map(|p| p.value)
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let field = self.field.map(|id| id.short_name()).unwrap_or("-");
        write!(
            f,
            "[{}] {:<28} {:<3} residual={:.3e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check_name,
            field,
            self.residual,
            self.tolerance
        )?;
        for p in &self.parameters {
            write!(f, " {}={}", p.name, p.value)?;
        }
        Ok(())
    }
}
