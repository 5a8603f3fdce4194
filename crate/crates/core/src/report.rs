//! Check rows and the consolidated report.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The computation disagrees with a published statement that is known to
    /// be a misprint or ambiguous; does not fail a run.
    FlaggedDiscrepancy,
    Skipped,
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in the published source.
    Published,
    /// Follows from a definition.
    Trivial,
    /// Computed here by an independent route.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub citation: String,
    pub expected: Value,
    pub provenance: Provenance,
    pub computed: Value,
    pub status: Status,
    pub ms: u64,
}

impl CheckReport {
    fn row(check: &str, citation: &str, provenance: Provenance, expected: Value, computed: Value, status: Status) -> Self {
        Self { check: check.into(), citation: citation.into(), expected, provenance, computed, status, ms: 0 }
    }

    /// Pass iff the serialized values are equal.
    pub fn exact(check: &str, citation: &str, provenance: Provenance, expected: impl Serialize, computed: impl Serialize) -> Self {
        let (e, c) = (to_value(expected), to_value(computed));
        let status = if e == c { Status::Pass } else { Status::Fail };
        Self::row(check, citation, provenance, e, c, status)
    }

    /// Pass iff `computed < bound`.
    pub fn below(check: &str, citation: &str, provenance: Provenance, bound: f64, computed: f64) -> Self {
        let status = if computed < bound { Status::Pass } else { Status::Fail };
        Self::row(check, citation, provenance, json!({ "below": bound }), json!(computed), status)
    }

    pub fn boolean(check: &str, citation: &str, provenance: Provenance, ok: bool, computed: impl Serialize) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self::row(check, citation, provenance, json!(true), to_value(computed), status)
    }

    /// Expected value from the published source disagrees with the
    /// computation in a known way.
    pub fn flagged(check: &str, citation: &str, expected: impl Serialize, computed: impl Serialize) -> Self {
        Self::row(check, citation, Provenance::Published, to_value(expected), to_value(computed), Status::FlaggedDiscrepancy)
    }

    pub fn skipped(check: &str, citation: &str, provenance: Provenance, expected: impl Serialize, reason: &str) -> Self {
        Self::row(check, citation, provenance, to_value(expected), json!({ "skipped": reason }), Status::Skipped)
    }

    pub fn with_ms(mut self, ms: u64) -> Self {
        self.ms = ms;
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("check values serialize")
}

/// Run `f` and return its result with elapsed milliseconds.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_millis() as u64)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<CheckReport>,
}

impl Report {
    pub fn push(&mut self, row: CheckReport) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = CheckReport>) {
        self.rows.extend(rows);
    }

    /// True iff no row failed; flagged and skipped rows do not count.
    pub fn ok(&self) -> bool {
        !self.rows.iter().any(CheckReport::is_fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.rows.iter().filter(|r| r.is_fail())
    }

    pub fn get(&self, check: &str) -> Option<&CheckReport> {
        self.rows.iter().find(|r| r.check == check)
    }

    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_keys_and_status_names() {
        let r = CheckReport::flagged("x", "c", 1, 2);
        let v = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["check", "citation", "computed", "expected", "ms", "provenance", "status"]);
        assert_eq!(v["status"], "flagged-discrepancy");
        assert_eq!(v["provenance"], "published");
    }

    #[test]
    fn flagged_rows_do_not_fail_a_report() {
        let mut rep = Report::default();
        rep.push(CheckReport::exact("a", "", Provenance::Trivial, 1, 1));
        rep.push(CheckReport::flagged("b", "", 1, 2));
        assert!(rep.ok());
        rep.push(CheckReport::exact("c", "", Provenance::Trivial, 1, 2));
        assert!(!rep.ok());
    }
}
