//! Versioned verification reports: a deterministic, CI-friendly document
//! with one line per check plus optional machine-readable artifacts.
//!
//! Schema version 1, top level: `{version, command, config, results[],
//! verdict, notes[], artifacts?}`. `results[*]` is `{name, status,
//! witness, notes[]}` with status one of `pass | fail | inconclusive |
//! cited`. Content is byte-identical for identical config; wall-clock
//! data only appears behind an explicit opt-in. Schema changes are
//! append-only.

use std::collections::BTreeMap;

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Cited,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub witness: String,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub results: Vec<CheckResult>,
    pub verdict: Status,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub artifacts: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(command: &str, config: &[(&str, String)]) -> Report {
        Report {
            version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            config: config.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            results: Vec::new(),
            verdict: Status::Pass,
            notes: Vec::new(),
            artifacts: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, name: &str, status: Status, witness: impl Into<String>) {
        self.push_with_notes(name, status, witness, Vec::new());
    }

    pub fn push_with_notes(
        &mut self,
        name: &str,
        status: Status,
        witness: impl Into<String>,
        notes: Vec<String>,
    ) {
        self.results.push(CheckResult {
            name: name.to_string(),
            status,
            witness: witness.into(),
            notes,
        });
        self.verdict = self.computed_verdict();
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn attach(&mut self, key: &str, value: serde_json::Value) {
        self.artifacts.insert(key.to_string(), value);
    }

    /// A definite failure outranks an open question; citations count as
    /// passing.
    fn computed_verdict(&self) -> Status {
        if self.results.iter().any(|r| r.status == Status::Fail) {
            Status::Fail
        } else if self.results.iter().any(|r| r.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    /// Process exit code: 0 pass/cited, 1 fail, 3 inconclusive. Usage
    /// errors (2) never produce a report.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Status::Pass | Status::Cited => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.command));
        for (k, v) in &self.config {
            out.push_str(&format!("#   {k} = {v}\n"));
        }
        let name_width = self
            .results
            .iter()
            .map(|r| r.name.len())
            .max()
            .unwrap_or(0)
            .max(5);
        for r in &self.results {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Inconclusive => "inconclusive",
                Status::Cited => "cited",
            };
            out.push_str(&format!(
                "{:<name_width$}  {:<12}  {}\n",
                r.name, status, r.witness
            ));
            for note in &r.notes {
                out.push_str(&format!("{:<name_width$}  {:<12}  note: {note}\n", "", ""));
            }
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        let verdict = match self.verdict {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Inconclusive => "inconclusive",
            Status::Cited => "cited",
        };
        out.push_str(&format!("verdict: {verdict}\n"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_aggregation_and_exit_codes() {
        let mut r = Report::new("demo", &[("n", "3".to_string())]);
        assert_eq!(r.exit_code(), 0);
        r.push("a", Status::Pass, "ok");
        r.push("b", Status::Cited, "source");
        assert_eq!(r.verdict, Status::Pass);
        assert_eq!(r.exit_code(), 0);
        r.push("c", Status::Inconclusive, "budget");
        assert_eq!(r.verdict, Status::Inconclusive);
        assert_eq!(r.exit_code(), 3);
        r.push("d", Status::Fail, "broken");
        assert_eq!(r.verdict, Status::Fail);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn serialization_is_deterministic_and_versioned() {
        let build = || {
            let mut r = Report::new("demo", &[("n", "2".to_string())]);
            r.push("x", Status::Pass, "w");
            r.note("a note");
            r.attach("blob", serde_json::json!({"k": [1, 2]}));
            r
        };
        let a = build().to_json();
        let b = build().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"version\": \"1\""));
        for key in ["\"command\"", "\"config\"", "\"results\"", "\"verdict\"", "\"notes\"", "\"artifacts\""] {
            assert!(a.contains(key), "missing {key}");
        }
    }

    #[test]
    fn human_rendering_lists_every_check() {
        let mut r = Report::new("demo", &[]);
        r.push("alpha", Status::Pass, "fine");
        r.push_with_notes("beta", Status::Fail, "broken", vec!["why".to_string()]);
        let text = r.render_human();
        assert!(text.contains("alpha"));
        assert!(text.contains("FAIL"));
        assert!(text.contains("note: why"));
        assert!(text.contains("verdict: FAIL"));
    }
}
