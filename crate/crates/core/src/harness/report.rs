//! Check records and their two renderings. The record format is one line
//! per check with tab-separated `key=value` fields in the fixed order
//! `id, anchor, status, witness, millis`.

use std::fmt::Write as _;
use std::time::Instant;

use sha2::{Digest, Sha256};

use crate::check::CheckResult;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    /// A summary on success, the failing check and its witness otherwise.
    pub witness: String,
    pub millis: u128,
}

impl Record {
    /// Times `run`; a returned summary marks a pass.
    pub fn run(id: impl Into<String>, anchor: &str, run: impl FnOnce() -> Result<String, crate::check::CheckFailure>) -> Record {
        let start = Instant::now();
        let outcome = run();
        let millis = start.elapsed().as_millis();
        let (status, witness) = match outcome {
            Ok(summary) => (Status::Pass, summary),
            Err(e) => (Status::Fail, e.to_string()),
        };
        Record { id: id.into(), anchor: anchor.to_string(), status, witness, millis }
    }

    /// A check with nothing to summarize.
    pub fn check(id: impl Into<String>, anchor: &str, run: impl FnOnce() -> CheckResult) -> Record {
        Record::run(id, anchor, || run().map(|()| String::new()))
    }

    pub fn skipped(id: impl Into<String>, anchor: &str, reason: impl Into<String>) -> Record {
        Record { id: id.into(), anchor: anchor.to_string(), status: Status::Skipped, witness: reason.into(), millis: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub version: String,
    pub input_digest: String,
    pub records: Vec<Record>,
}

/// Tabs, newlines and backslashes would break the one-line layout.
fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn digest_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl Report {
    pub fn new(input: &[u8], records: Vec<Record>) -> Self {
        Report { version: TOOL_VERSION.to_string(), input_digest: digest_hex(input), records }
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    /// Machine-readable form. Wall time is printed as `-` unless `timings`
    /// is set, so that repeated runs are byte-identical.
    pub fn render_records(&self, timings: bool) -> String {
        let mut out = format!("# monoid-recon {} input-sha256 {}\n", self.version, self.input_digest);
        for r in &self.records {
            let millis = if timings { r.millis.to_string() } else { "-".to_string() };
            let _ = writeln!(
                out,
                "id={}\tanchor={}\tstatus={}\twitness={}\tmillis={}",
                escape(&r.id),
                escape(&r.anchor),
                r.status.as_str(),
                escape(&r.witness),
                millis
            );
        }
        out
    }

    pub fn render_text(&self, timings: bool) -> String {
        let mut out = String::new();
        for r in &self.records {
            let mark = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(out, "{mark} {} [{}]", r.id, r.anchor);
            if !r.witness.is_empty() {
                let _ = write!(out, " {}", r.witness);
            }
            if timings {
                let _ = write!(out, " ({} ms)", r.millis);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::CheckFailure;

    #[test]
    fn records_are_one_line_each() {
        let records = vec![
            Record::check("a/b", "anchor", || Ok(())),
            Record::check("a/c", "anchor", || Err(CheckFailure::new("x", "line\nbreak\tand tab"))),
            Record::skipped("a/d", "anchor", "too large"),
        ];
        let report = Report::new(b"input", records);
        let text = report.render_records(false);
        assert_eq!(text.lines().count(), 4);
        assert!(text.contains("witness=x: line\\nbreak\\tand tab\tmillis=-"));
        assert_eq!(report.failures(), 1);
        assert!(!report.passed());
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(digest_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
