//! Machine-readable verification reports.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub relation: String,
    pub status: CheckStatus,
    pub max_residual: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub context: String,
    pub checks: Vec<CheckResult>,
    /// Non-fatal observations (convention mismatches detected and resolved).
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(context: impl Into<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            context: context.into(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, relation: impl Into<String>, pass: bool, max_residual: f64) {
        self.checks.push(CheckResult {
            relation: relation.into(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            max_residual,
        });
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failed_relations(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.relation.as_str())
            .collect()
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }
}
