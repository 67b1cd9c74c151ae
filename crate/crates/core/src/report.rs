//! Structured pass/fail reporting shared by every check in the toolkit.
//!
//! Reports are plain data with a canonical field order so that serialized
//! output is byte-identical across runs and thread counts. Wall-clock timing
//! is deliberately not part of the serializable payload.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One named sub-check. A failing identity check carries the nonzero
/// difference polynomial as its witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn new() -> CheckReport {
        CheckReport::default()
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.results.push(CheckResult {
            check_name: name.into(),
            status: Status::Pass,
            witness: None,
            detail: None,
        });
    }

    pub fn pass_with_detail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.results.push(CheckResult {
            check_name: name.into(),
            status: Status::Pass,
            witness: None,
            detail: Some(detail.into()),
        });
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.results.push(CheckResult {
            check_name: name.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            detail: None,
        });
    }

    pub fn record(&mut self, name: impl Into<String>, ok: bool, witness: impl Into<String>) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, witness);
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.results.extend(other.results);
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }
}

/// Top-level run report emitted by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub checks: Vec<CheckResult>,
    pub summary: Status,
}

impl Report {
    pub fn new(family: Option<String>, checks: Vec<CheckResult>) -> Report {
        let summary = if checks.iter().all(|c| c.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        Report {
            version: env!("CARGO_PKG_VERSION").to_owned(),
            family,
            checks,
            summary,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_reflects_checks() {
        let mut cr = CheckReport::new();
        cr.pass("alpha");
        cr.fail("beta", "1 + e1");
        let report = Report::new(Some("circle".into()), cr.results.clone());
        assert_eq!(report.summary, Status::Fail);
        assert!(!cr.all_passed());
        assert_eq!(cr.failures().count(), 1);
    }

    #[test]
    fn json_roundtrip() {
        let mut cr = CheckReport::new();
        cr.pass_with_detail("gram", "rank 22");
        cr.fail("orthogonality", "2*s");
        let report = Report::new(None, cr.results);
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }
}
