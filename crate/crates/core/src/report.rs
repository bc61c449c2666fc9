//! Structured outcome of a verification suite.

use std::fmt;
use std::time::Duration;

use serde::Serialize;

use crate::exactalg::LaurentPolynomial;
use crate::poisson::SystemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    ExactPass,
    NumericPass,
    Fail,
}

impl CheckStatus {
    pub fn is_pass(self) -> bool {
        self != CheckStatus::Fail
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::ExactPass => "exact-pass",
            CheckStatus::NumericPass => "numeric-pass",
            CheckStatus::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: CheckStatus,
    /// Offending polynomial, matrix or values; only set on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub spec: SystemSpec,
    pub checks: Vec<Check>,
    /// Wall-clock time; left out of serialized output so reports stay
    /// byte-identical across runs.
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, spec: SystemSpec) -> Self {
        VerificationReport {
            suite: suite.into(),
            spec,
            checks: Vec::new(),
            elapsed: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status.is_pass())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.status.is_pass())
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Records an exact check; `witness` is only evaluated on failure.
    pub fn exact(&mut self, id: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) {
        self.push(id.into(), ok, CheckStatus::ExactPass, witness);
    }

    pub fn numeric(&mut self, id: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) {
        self.push(id.into(), ok, CheckStatus::NumericPass, witness);
    }

    /// Exact check that `p` is the zero polynomial.
    pub fn zero(&mut self, id: impl Into<String>, p: &LaurentPolynomial) {
        self.exact(id, p.is_zero(), || p.to_string());
    }

    /// Records an operation error as a failed check.
    pub fn error(&mut self, id: impl Into<String>, err: impl fmt::Display) {
        self.push(id.into(), false, CheckStatus::Fail, || format!("error: {err}"));
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    fn push(&mut self, id: String, ok: bool, pass: CheckStatus, witness: impl FnOnce() -> String) {
        let check = if ok {
            Check {
                id,
                status: pass,
                witness: None,
            }
        } else {
            Check {
                id,
                status: CheckStatus::Fail,
                witness: Some(witness()),
            }
        };
        self.checks.push(check);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.checks.iter().filter(|c| c.status.is_pass()).count();
        write!(
            f,
            "{} {}: {}/{} checks passed",
            self.spec,
            self.suite,
            ok,
            self.checks.len()
        )?;
        if let Some(d) = self.elapsed {
            write!(f, " ({:.2?})", d)?;
        }
        writeln!(f)?;
        for c in &self.checks {
            write!(f, "  [{}] {}", c.status, c.id)?;
            if let Some(w) = &c.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
