use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use theta_sw_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// One verified claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub detail: String,
    pub micros: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// Times `f` and records its verdict. A library error becomes a failed
    /// check carrying the error message.
    pub fn run<F>(&mut self, id: impl Into<String>, anchor: impl Into<String>, f: F)
    where
        F: FnOnce() -> Result<(bool, String), Error>,
    {
        let id = id.into();
        debug_assert!(self.checks.iter().all(|c| c.id != id), "duplicate check id {id}");
        let start = Instant::now();
        let (ok, detail) = match f() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(Check {
            id,
            anchor: anchor.into(),
            status: Status::from_bool(ok),
            detail,
            micros: start.elapsed().as_micros() as u64,
        });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn render_text(&self, with_timing: bool) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(out, "{} {:<40} {}", c.status.label(), c.id, c.anchor);
            if with_timing {
                let _ = write!(out, " ({} us)", c.micros);
            }
            let _ = writeln!(out);
            if !c.detail.is_empty() {
                let _ = writeln!(out, "     {}", c.detail);
            }
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{}: {} checks, {} failed",
            self.suite,
            self.checks.len(),
            failed
        );
        out
    }
}
