//! Uniform pass/fail records for verification checks.

use serde::Serialize;
use serde_json::Value;

/// How a check outcome should be treated by callers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// A proven identity; failure is a bug.
    Hard,
    /// An empirical observation; recorded, never fatal.
    Conjecture,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub n: usize,
    pub params: Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub status: Status,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, n: usize, params: Value) -> Self {
        CheckReport {
            check: check.into(),
            n,
            params,
            pass: true,
            witness: None,
            status: Status::Hard,
        }
    }

    pub fn conjecture(mut self) -> Self {
        self.status = Status::Conjecture;
        self
    }

    /// Records a failure; only the first witness is kept.
    pub fn fail(&mut self, witness: impl Into<String>) {
        if self.pass {
            self.witness = Some(witness.into());
        }
        self.pass = false;
    }

    /// Records a failure with `witness` unless `ok` holds.
    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.fail(witness());
        }
    }

    pub fn is_hard_failure(&self) -> bool {
        !self.pass && self.status == Status::Hard
    }

    pub fn line(&self) -> String {
        let verdict = match (self.pass, self.status) {
            (true, _) => "PASS",
            (false, Status::Hard) => "FAIL",
            (false, Status::Conjecture) => "OBSERVED-FAIL",
        };
        match &self.witness {
            Some(w) => format!("{verdict} {} n={} ({w})", self.check, self.n),
            None => format!("{verdict} {} n={}", self.check, self.n),
        }
    }
}
