//! Structured diagnostics shared by the validators.

use serde::Serialize;
use std::fmt;

/// One violated constraint, with a stable check identifier and a pinpointed
/// location in the message.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Violation {
    pub check: String,
    pub message: String,
}

impl Violation {
    pub fn new(check: impl Into<String>, message: impl Into<String>) -> Self {
        Violation { check: check.into(), message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.check, self.message)
    }
}

/// Report accumulated by a validator; empty means valid.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation::new(check, message));
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}
