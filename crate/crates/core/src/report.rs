//! Verification reports shared by every axiom checker.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Outcome of a single named law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    /// Quantifier witness (basis labels or group indices) for a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Wall-clock time; left unset unless timings were requested so that
    /// reports stay byte-identical between runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckRecord {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            status: Status::Pass,
            witness: None,
            lhs: None,
            rhs: None,
            detail: None,
            elapsed_ms: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckRecord { status: Status::Fail, witness: Some(witness.into()), ..Self::pass(name) }
    }

    pub fn error(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckRecord { status: Status::Error, detail: Some(detail.into()), ..Self::pass(name) }
    }

    pub fn with_sides(mut self, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        self.lhs = Some(lhs.into());
        self.rhs = Some(rhs.into());
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rec: CheckRecord) {
        self.checks.push(rec);
    }

    /// Records `pass` when `ok`, otherwise a failure with the given witness.
    pub fn expect(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.push(CheckRecord::pass(name));
        } else {
            self.push(CheckRecord::fail(name, witness()));
        }
    }

    /// Appends every record of `other`, prefixing names with `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut rec in other.checks {
            if !prefix.is_empty() {
                rec.name = format!("{prefix}/{}", rec.name);
            }
            self.checks.push(rec);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// True when a record with this exact name exists and passed.
    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(CheckRecord::passed)
    }

    pub fn set_elapsed(&mut self, from: usize, elapsed: Duration) {
        for rec in &mut self.checks[from..] {
            rec.elapsed_ms.get_or_insert(elapsed.as_millis() as u64);
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS ",
                Status::Fail => "FAIL ",
                Status::Error => "ERROR",
            };
            write!(f, "{tag} {}", c.name)?;
            if let Some(ms) = c.elapsed_ms {
                write!(f, " ({ms} ms)")?;
            }
            writeln!(f)?;
            if let Some(w) = &c.witness {
                writeln!(f, "      at {w}")?;
            }
            if let Some(l) = &c.lhs {
                writeln!(f, "      lhs = {l}")?;
            }
            if let Some(r) = &c.rhs {
                writeln!(f, "      rhs = {r}")?;
            }
            if let Some(d) = &c.detail {
                writeln!(f, "      {d}")?;
            }
        }
        Ok(())
    }
}
