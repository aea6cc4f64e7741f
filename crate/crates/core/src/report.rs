//! Structured pass/fail results shared by every verification suite.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The suite did not fit the requested order budget.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub location: String,
    pub expected: String,
    pub actual: String,
}

/// `status` is `fail` exactly when `first_discrepancy` is present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub name: String,
    pub order: u32,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub status: Status,
    pub checked_count: u64,
    pub first_discrepancy: Option<Discrepancy>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn new(suite: &str, name: &str, order: u32) -> Self {
        VerificationReport {
            suite: suite.into(),
            name: name.into(),
            order,
            parameters: BTreeMap::new(),
            status: Status::Pass,
            checked_count: 0,
            first_discrepancy: None,
            elapsed_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    pub fn skipped(mut self, reason: &str) -> Self {
        self.status = Status::Skipped;
        self.parameters.insert("skip_reason".into(), reason.into());
        self
    }

    /// Records one comparison; only the first mismatch is kept.
    pub fn check(&mut self, location: impl FnOnce() -> String, expected: &str, actual: &str) -> bool {
        self.checked_count += 1;
        if expected == actual {
            return true;
        }
        self.fail(location(), expected, actual);
        false
    }

    pub fn fail(&mut self, location: String, expected: &str, actual: &str) {
        if self.first_discrepancy.is_none() {
            self.first_discrepancy = Some(Discrepancy { location, expected: expected.into(), actual: actual.into() });
        }
        self.status = Status::Fail;
    }

    pub fn absorb(&mut self, checked: usize, d: Option<Discrepancy>) {
        self.checked_count += checked as u64;
        if let Some(d) = d {
            self.fail(d.location, &d.expected, &d.actual);
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn summary_line(&self) -> String {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        };
        let mut line = format!("{status:7} {}/{} order={} checked={}", self.suite, self.name, self.order, self.checked_count);
        if let Some(d) = &self.first_discrepancy {
            line.push_str(&format!(" at {}: expected {} got {}", d.location, d.expected, d.actual));
        }
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_discrepancy_is_kept() {
        let mut r = VerificationReport::new("x", "y", 3);
        assert!(r.check(|| "a".into(), "1", "1"));
        assert!(!r.check(|| "b".into(), "1", "2"));
        assert!(!r.check(|| "c".into(), "1", "3"));
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.first_discrepancy.as_ref().unwrap().location, "b");
        assert_eq!(r.checked_count, 3);
        let json = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(json.contains("\"status\":\"fail\""));
    }
}
