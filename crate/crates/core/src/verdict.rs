//! Pass/fail records shared by the certificate, regime and verification code.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    /// Constant-free inequality, evaluated as written.
    Exact,
    /// Inequality with an unnamed constant, evaluated at `C = 1`.
    Structural,
    /// Reported for context; never counted as a failure.
    Informational,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub kind: VerdictKind,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, kind: VerdictKind, passed: bool, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            kind,
            passed,
            value,
            bound,
            detail: String::new(),
        }
    }

    /// `value ≤ bound`.
    pub fn at_most(name: impl Into<String>, kind: VerdictKind, value: f64, bound: f64) -> Self {
        Self::new(name, kind, value <= bound, value, bound)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// Whether this verdict should fail a run.
    pub fn is_failure(&self) -> bool {
        !self.passed && self.kind != VerdictKind::Informational
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (self.kind, self.passed) {
            (VerdictKind::Informational, _) => "INFO",
            (_, true) => "PASS",
            (_, false) => "FAIL",
        };
        write!(f, "{tag} {} value={:.6e} bound={:.6e}", self.name, self.value, self.bound)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

pub fn all_pass(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| !v.is_failure())
}
