use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::grid::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMeta {
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub grid: Grid,
    pub suites: Vec<String>,
    pub seed: u64,
    pub versions: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    /// Canonical rendering of a counterexample, or the skip reason.
    pub witness: Option<String>,
    pub wall_micros: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub meta: RunMeta,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failed(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    /// `0` if nothing failed, else `1`.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<VerificationReport> {
        serde_json::from_str(s)
    }

    /// Per-suite summary followed by every non-passing check.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Verification report\n");
        let _ = writeln!(out, "grid `{}`, seed {}\n", self.meta.grid, self.meta.seed);
        let _ = writeln!(out, "| suite | pass | fail | skipped | time (ms) |");
        let _ = writeln!(out, "|---|---:|---:|---:|---:|");
        for suite in &self.meta.suites {
            let rows: Vec<&CheckRecord> = self.checks.iter().filter(|c| &c.suite == suite).collect();
            let n = |s| rows.iter().filter(|c| c.status == s).count();
            let ms: u64 = rows.iter().map(|c| c.wall_micros).sum::<u64>() / 1000;
            let _ = writeln!(
                out,
                "| {suite} | {} | {} | {} | {ms} |",
                n(Status::Pass),
                n(Status::Fail),
                n(Status::Skipped)
            );
        }
        let notable: Vec<&CheckRecord> = self.checks.iter().filter(|c| c.status != Status::Pass).collect();
        if !notable.is_empty() {
            let _ = writeln!(out, "\n| check | params | status | witness |");
            let _ = writeln!(out, "|---|---|---|---|");
            for c in notable {
                let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let witness = c.witness.as_deref().unwrap_or("").replace('\n', " ").replace('|', "\\|");
                let _ = writeln!(
                    out,
                    "| {} | {} | {:?} | {} |",
                    c.name,
                    params.join(" "),
                    c.status,
                    witness
                );
            }
        }
        out
    }
}
