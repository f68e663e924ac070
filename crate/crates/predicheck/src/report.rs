//! Run reports: a stable section that is byte-identical across runs, and
//! a timing section that is not.

use std::fmt::Write as _;

use predicheck_core::report::{Record, Status};
use serde::{Deserialize, Serialize};

pub const TOOL: &str = "predicheck";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordOut {
    pub name: String,
    pub kind: String,
    pub status: String,
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileReport {
    pub path: String,
    pub records: Vec<RecordOut>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub records: usize,
    pub ok: usize,
    pub failed: usize,
    pub expected_reject: usize,
    pub unexpected_accept: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stable {
    pub tool: String,
    pub version: String,
    pub files: Vec<FileReport>,
    pub counts: Counts,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FileTiming {
    pub path: String,
    pub elapsed_ms: f64,
    /// One entry per record, in record order.
    pub records_ms: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
    pub files: Vec<FileTiming>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub stable: Stable,
    pub timing: Timing,
}

/// Records of one input with their source positions resolved.
#[derive(Clone, Debug)]
pub struct FileOutcome {
    pub path: String,
    pub records: Vec<RecordOut>,
    pub timing: FileTiming,
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text.as_bytes()[..offset.min(text.len())];
    let line = before.iter().filter(|b| **b == b'\n').count() + 1;
    let col = before.iter().rev().take_while(|b| **b != b'\n').count() + 1;
    (line, col)
}

pub fn record_out(text: &str, r: &Record) -> RecordOut {
    let (line, column) = line_col(text, r.span.start);
    RecordOut {
        name: r.name.clone(),
        kind: r.kind.clone(),
        status: r.status.as_str().to_string(),
        line,
        column,
        start: r.span.start,
        end: r.span.end,
        diagnostic: r.message.clone(),
    }
}

fn passes(status: &str) -> bool {
    status == Status::Ok.as_str() || status == Status::ExpectedReject.as_str()
}

impl RunReport {
    pub fn new(outcomes: Vec<FileOutcome>, elapsed_ms: f64) -> RunReport {
        let mut counts = Counts::default();
        for r in outcomes.iter().flat_map(|o| &o.records) {
            counts.records += 1;
            match r.status.as_str() {
                "ok" => counts.ok += 1,
                "failed" => counts.failed += 1,
                "expected-reject" => counts.expected_reject += 1,
                _ => counts.unexpected_accept += 1,
            }
        }
        let passed = outcomes.iter().flat_map(|o| &o.records).all(|r| passes(&r.status));
        let timing = Timing { elapsed_ms, files: outcomes.iter().map(|o| o.timing.clone()).collect() };
        let files = outcomes.into_iter().map(|o| FileReport { path: o.path, records: o.records }).collect();
        RunReport {
            stable: Stable { tool: TOOL.to_string(), version: VERSION.to_string(), files, counts, passed },
            timing,
        }
    }

    pub fn passed(&self) -> bool {
        self.stable.passed
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The deterministic part, as pretty JSON with a trailing newline.
    pub fn stable_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.stable).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One line per record, then a summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.stable.files {
            for r in &f.records {
                let _ = write!(out, "{}:{}:{}: {} {} {}", f.path, r.line, r.column, r.kind, r.name, r.status);
                if let Some(d) = &r.diagnostic {
                    let _ = write!(out, ": {d}");
                }
                out.push('\n');
            }
        }
        let c = &self.stable.counts;
        let _ = writeln!(
            out,
            "{} record(s): {} ok, {} failed, {} expected-reject, {} unexpected-accept",
            c.records, c.ok, c.failed, c.expected_reject, c.unexpected_accept
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
        assert_eq!(line_col("", 5), (1, 1));
    }

    #[test]
    fn empty_report_passes() {
        let r = RunReport::new(Vec::new(), 0.0);
        assert!(r.passed());
        assert_eq!(r.stable.counts.records, 0);
    }
}
