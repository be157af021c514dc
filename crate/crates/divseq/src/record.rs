//! Report records and their table, CSV and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// Report-only value, never asserted.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub status: Status,
    /// For failures, the exact instance that failed.
    pub detail: String,
}

/// One experiment: per-term rows, check outcomes and the indices whose
/// factorization ran out of budget.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRecord {
    pub experiment: String,
    pub parameters: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// The table rendering shows only this many leading columns.
    #[serde(skip)]
    pub table_width: usize,
    pub checks: Vec<CheckRecord>,
    pub budget_exhausted: Vec<u64>,
}

impl ReportRecord {
    pub fn new(experiment: impl Into<String>, columns: &[&str], table_width: usize) -> Self {
        ReportRecord {
            experiment: experiment.into(),
            parameters: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            table_width,
            checks: Vec::new(),
            budget_exhausted: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn check(&mut self, check: &str, n: Option<u64>, status: Status, detail: impl Into<String>) {
        self.checks.push(CheckRecord { check: check.to_string(), n, status, detail: detail.into() });
    }

    pub fn pass_or_fail(&mut self, check: &str, n: Option<u64>, ok: bool, detail: impl Into<String>) {
        self.check(check, n, if ok { Status::Pass } else { Status::Fail }, detail);
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    /// `col | col | ...` lines, header first.
    pub fn render_table(&self) -> String {
        let w = self.table_width.min(self.columns.len());
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns[..w].join(" | "));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row[..w].join(" | "));
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv of utf-8 fields")
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    /// Per-check counts plus every failure, for stderr.
    pub fn summary(&self) -> String {
        let mut order: Vec<&str> = Vec::new();
        let mut counts: BTreeMap<&str, [usize; 4]> = BTreeMap::new();
        for c in &self.checks {
            if !counts.contains_key(c.check.as_str()) {
                order.push(&c.check);
            }
            let slot = counts.entry(&c.check).or_default();
            slot[c.status as usize] += 1;
        }
        let mut out = String::new();
        for name in order {
            let [pass, fail, skip, info] = counts[name];
            let _ = writeln!(out, "check {name}: {pass} pass, {fail} fail, {skip} skipped, {info} info");
        }
        for c in self.checks.iter().filter(|c| c.status == Status::Fail) {
            let at = c.n.map(|n| format!(" n={n}")).unwrap_or_default();
            let _ = writeln!(out, "FAIL {}{at}: {}", c.check, c.detail);
        }
        if !self.budget_exhausted.is_empty() {
            let list: Vec<String> = self.budget_exhausted.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(out, "budget exhausted at n = {}", list.join(", "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renderings() {
        let mut r = ReportRecord::new("demo", &["n", "value", "extra"], 2);
        r.rows.push(vec!["1".into(), "2^3".into(), "x".into()]);
        r.pass_or_fail("demo", Some(1), true, "ok");
        r.pass_or_fail("demo", Some(2), false, "3 < 4");
        assert_eq!(r.render_table(), "n | value\n1 | 2^3\n");
        assert_eq!(r.render_csv(), "n,value,extra\n1,2^3,x\n");
        assert!(r.failed());
        assert!(r.summary().contains("FAIL demo n=2: 3 < 4"));
        let json: serde_json::Value = serde_json::from_str(&r.render_json()).unwrap();
        assert_eq!(json["checks"][1]["status"], "fail");
    }
}
