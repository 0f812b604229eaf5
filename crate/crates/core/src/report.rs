//! Pass/fail reports shared by the validators.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<String>,
}

/// Ordered list of named checks. Failures are entries, never errors.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub subject: String,
    pub passed: bool,
    /// Set for MCC and MUB reports: whether the set has `D + 1` members.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub maximal: Option<bool>,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport { subject: subject.into(), passed: true, maximal: None, checks: Vec::new() }
    }

    pub fn push(&mut self, name: &str, counterexample: Option<String>, residual: Option<f64>) {
        let passed = counterexample.is_none();
        self.passed &= passed;
        self.checks.push(Check { name: name.to_string(), passed, residual, counterexample });
    }

    /// Records a check whose verdict is given explicitly (e.g. informational flags).
    pub fn push_flag(&mut self, name: &str, passed: bool, detail: Option<String>) {
        self.passed &= passed;
        self.checks.push(Check { name: name.to_string(), passed, residual: None, counterexample: detail });
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Verdicts only, in order; used to compare reports across rescalings.
    pub fn verdicts(&self) -> Vec<(String, bool)> {
        self.checks.iter().map(|c| (c.name.clone(), c.passed)).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, if self.passed { "PASS" } else { "FAIL" })?;
        match self.maximal {
            Some(true) => writeln!(f, " (maximal)")?,
            Some(false) => writeln!(f, " (not maximal)")?,
            None => writeln!(f)?,
        }
        for c in &self.checks {
            write!(f, "  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name)?;
            if let Some(r) = c.residual {
                write!(f, " residual={r:e}")?;
            }
            if let Some(cx) = &c.counterexample {
                write!(f, " ({cx})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
