//! JSON and text renderings of a [`RunReport`].

use std::fmt::Write;

use clap::ValueEnum;
use qhopf_core::{Status, VerificationReport};

use crate::pipeline::RunReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn tag(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    }
}

pub fn to_json(r: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<RunReport> {
    serde_json::from_str(text)
}

/// Same fields as the JSON document, one record per line.
pub fn to_text(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "schema: {}", r.schema);
    let _ = writeln!(out, "datum: {}", r.datum);
    if let Some(c) = &r.comod {
        let _ = writeln!(out, "comod: {c}");
    }
    let _ = writeln!(out, "status: {}", tag(r.status));
    for c in &r.checks {
        let _ = write!(out, "\n[{}] {}", tag(c.status), c.name);
        if let Some(ms) = c.elapsed_ms {
            let _ = write!(out, " ({ms} ms)");
        }
        out.push('\n');
        let body = VerificationReport { checks: c.records.clone() }.to_string();
        for line in body.lines() {
            let _ = writeln!(out, "  {line}");
        }
    }
    out
}

pub fn render(r: &RunReport, f: Format) -> String {
    match f {
        Format::Json => to_json(r),
        Format::Text => to_text(r),
    }
}

/// One line: overall status and per-check statuses.
pub fn summary(r: &RunReport) -> String {
    let parts: Vec<String> = r.checks.iter().map(|c| format!("{}={}", c.name, tag(c.status).to_lowercase())).collect();
    format!("{} {}", tag(r.status), parts.join(" "))
}
