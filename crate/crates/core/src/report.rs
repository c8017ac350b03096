//! Verification reports, rendered as text or JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Version tag of the ball enumeration order; bumped whenever the order of
/// enumerated elements could change.
pub const ENUMERATION_ORDER: &str = "bfs-cmp-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    /// Passed with nothing to check.
    VacuousPass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub bound: Option<u32>,
    pub verdict: Verdict,
    pub counts: BTreeMap<String, u64>,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: &str, bound: Option<u32>) -> Check {
        Check {
            name: name.to_string(),
            bound,
            verdict: Verdict::Pass,
            counts: BTreeMap::new(),
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn count(&mut self, key: &str, n: u64) {
        *self.counts.entry(key.to_string()).or_insert(0) += n;
    }

    /// Records a violation. Only the first few witnesses are kept.
    pub fn fail(&mut self, witness: String) {
        self.verdict = Verdict::Fail;
        self.count("violations", 1);
        if self.witnesses.len() < 5 {
            self.witnesses.push(witness);
        }
    }

    pub fn vacuous(&mut self, note: &str) {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::VacuousPass;
        }
        self.note = Some(note.to_string());
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub title: String,
    pub enumeration_order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    /// Wall-clock milliseconds per check; excluded from verdict comparison.
    pub timing_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            title: title.into(),
            enumeration_order: ENUMERATION_ORDER.into(),
            seed: None,
            classification: None,
            checks: Vec::new(),
            notes: Vec::new(),
            timing_ms: BTreeMap::new(),
        }
    }

    /// Appends a check. A bounded check that passed without counting
    /// anything is downgraded to a vacuous pass.
    pub fn push(&mut self, mut check: Check, elapsed: Duration) {
        if check.verdict == Verdict::Pass && check.bound.is_some() && check.counts.values().all(|&n| n == 0) {
            check.vacuous("nothing to check within the bound");
        }
        self.timing_ms.insert(check.name.clone(), elapsed.as_millis() as u64);
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
        self.timing_ms.extend(other.timing_ms);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The report without its timing field.
    pub fn without_timing(&self) -> Report {
        Report { timing_ms: BTreeMap::new(), ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        if let Some(c) = &self.classification {
            let _ = writeln!(out, "  classification: {c}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "  seed: {seed}");
        }
        for check in &self.checks {
            let verdict = match check.verdict {
                Verdict::Pass => "PASS",
                Verdict::VacuousPass => "PASS (vacuous)",
                Verdict::Fail => "FAIL",
            };
            let bound = check.bound.map(|b| format!(" [L={b}]")).unwrap_or_default();
            let counts = check
                .counts
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            let ms = self.timing_ms.get(&check.name).copied().unwrap_or(0);
            let _ = writeln!(out, "  {verdict:<14} {}{bound}  {counts}  ({ms} ms)", check.name);
            if let Some(note) = &check.note {
                let _ = writeln!(out, "                 note: {note}");
            }
            for w in &check.witnesses {
                let _ = writeln!(out, "                 witness: {w}");
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "  note: {note}");
        }
        let _ = writeln!(out, "  verdict: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}
