//! Machine-readable run summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = include_str!("../schema/run-report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

/// One verified quantity; passes when `value <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value: value.is_finite().then_some(value),
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub seed: u64,
    /// `sha256:<hex>` of the input file, or of the catalog reference.
    pub input_hash: Option<String>,
    pub status: Status,
    pub checks: Vec<Check>,
    pub result: Value,
    pub error: Option<ErrorReport>,
    /// Wall-clock milliseconds per phase; only with `--timings`, since
    /// they would break byte-identical reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64) -> Self {
        Self {
            tool: "minsurf".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            seed,
            input_hash: None,
            status: Status::Pass,
            checks: Vec::new(),
            result: Value::Null,
            error: None,
            timings: None,
        }
    }

    pub fn settle(&mut self) {
        if self.error.is_none() {
            self.status = if self.checks.iter().all(|c| c.pass) {
                Status::Pass
            } else {
                Status::Fail
            };
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// Human-readable form: summary lines, checks, status.
    pub fn to_text(&self, summary: &[String]) -> String {
        let mut s = String::new();
        for line in summary {
            let _ = writeln!(s, "{line}");
        }
        for c in &self.checks {
            let value = c.value.map_or("n/a".to_string(), |v| format!("{v:.3e}"));
            let tag = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{tag}  {:<28} {value:>10} <= {:.0e}", c.name, c.tolerance);
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error ({}): {}", e.kind, e.message);
        }
        if let Some(t) = &self.timings {
            for (k, ms) in t {
                let _ = writeln!(s, "time  {k:<12} {ms:.3} ms");
            }
        }
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        };
        let _ = writeln!(s, "status: {status}");
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(71);
    s.push_str("sha256:");
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}
