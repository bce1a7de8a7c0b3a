//! Outcome records shared by every verifier.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Indeterminate,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Indeterminate => "indeterminate",
            Status::Skipped => "skipped",
        })
    }
}

/// A replayable counterexample or observation.
///
/// `claim` names the predicate that failed; `ambient` is a generator-file
/// header (e.g. `perm 6`) so `elements` can be parsed back.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub claim: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<String>,
    pub elements: Vec<(String, String)>,
    pub values: BTreeMap<String, String>,
}

impl Witness {
    pub fn new(claim: impl Into<String>) -> Self {
        Witness { claim: claim.into(), ambient: None, elements: Vec::new(), values: BTreeMap::new() }
    }

    pub fn ambient(mut self, header: impl Into<String>) -> Self {
        self.ambient = Some(header.into());
        self
    }

    pub fn element(mut self, name: impl Into<String>, text: impl Into<String>) -> Self {
        self.elements.push((name.into(), text.into()));
        self
    }

    pub fn value(mut self, key: impl Into<String>, v: impl ToString) -> Self {
        self.values.insert(key.into(), v.to_string());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub scenario: String,
    pub status: Status,
    pub sampled: bool,
    pub witnesses: Vec<Witness>,
    pub counters: BTreeMap<String, u64>,
    pub facts: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl Verdict {
    pub fn new(scenario: impl Into<String>, status: Status) -> Self {
        Verdict {
            scenario: scenario.into(),
            status,
            sampled: false,
            witnesses: Vec::new(),
            counters: BTreeMap::new(),
            facts: BTreeMap::new(),
            notes: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn skipped(scenario: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut v = Verdict::new(scenario, Status::Skipped);
        v.notes.push(reason.into());
        v
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn count(&mut self, key: &str, by: u64) {
        *self.counters.entry(key.to_string()).or_insert(0) += by;
    }

    pub fn fact(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.facts.insert(key.to_string(), value.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// `holds (sampled)` when a sampled plan found nothing.
    pub fn status_text(&self) -> String {
        if self.sampled && self.status == Status::Holds {
            "holds (sampled)".to_string()
        } else {
            self.status.to_string()
        }
    }
}

/// Exit status for a batch: fails beat indeterminate beats everything else.
pub fn overall_status(verdicts: &[Verdict]) -> Status {
    if verdicts.iter().any(|v| v.status == Status::Fails) {
        Status::Fails
    } else if verdicts.iter().any(|v| v.status == Status::Indeterminate) {
        Status::Indeterminate
    } else {
        Status::Holds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Json,
}

/// Deterministic serialization; wall times appear only in human output.
pub fn emit_report(verdicts: &[Verdict], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            if verdicts.is_empty() {
                return String::new();
            }
            let mut s = serde_json::to_string_pretty(verdicts).expect("verdicts serialize");
            s.push('\n');
            s
        }
        ReportFormat::Human => {
            let mut out = String::new();
            for v in verdicts {
                out.push_str(&format!("{}: {}", v.scenario, v.status_text()));
                if !v.counters.is_empty() {
                    let c: Vec<String> = v.counters.iter().map(|(k, n)| format!("{k}={n}")).collect();
                    out.push_str(&format!(" [{}]", c.join(", ")));
                }
                out.push('\n');
                for (k, val) in &v.facts {
                    out.push_str(&format!("  {k}: {val}\n"));
                }
                for n in &v.notes {
                    out.push_str(&format!("  note: {n}\n"));
                }
                for w in &v.witnesses {
                    out.push_str(&format!("  witness {}", w.claim));
                    if let Some(a) = &w.ambient {
                        out.push_str(&format!(" in {a}"));
                    }
                    out.push('\n');
                    for (name, text) in &w.elements {
                        out.push_str(&format!("    {name} = {text}\n"));
                    }
                    for (k, val) in &w.values {
                        out.push_str(&format!("    {k}: {val}\n"));
                    }
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_empty() {
        assert_eq!(emit_report(&[], ReportFormat::Human), "");
        assert_eq!(emit_report(&[], ReportFormat::Json), "");
    }

    #[test]
    fn holds_line_has_counters() {
        let mut v = Verdict::new("demo", Status::Holds);
        v.count("pairs", 3);
        v.sampled = true;
        let s = emit_report(&[v], ReportFormat::Human);
        assert_eq!(s.lines().next().unwrap(), "demo: holds (sampled) [pairs=3]");
    }

    #[test]
    fn json_excludes_wall_time() {
        let mut v = Verdict::new("demo", Status::Fails);
        v.wall_time = Duration::from_secs(3);
        v.witnesses.push(Witness::new("x").element("c", "(1,2)"));
        let s = emit_report(&[v], ReportFormat::Json);
        assert!(!s.contains("wall"));
        assert!(s.contains("\"fails\""));
    }
}
