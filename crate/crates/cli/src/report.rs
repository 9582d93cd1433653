//! Reports: JSON with sorted keys, and CSV tables.

use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub anchor: String,
    pub pass: bool,
    pub residual: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn exact(anchor: impl Into<String>, nnz: usize) -> Check {
        Check { anchor: anchor.into(), pass: nnz == 0, residual: nnz as f64, detail: String::new() }
    }

    pub fn flag(anchor: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
        Check { anchor: anchor.into(), pass: ok, residual: if ok { 0.0 } else { 1.0 }, detail: detail.into() }
    }

    pub fn within(anchor: impl Into<String>, err: f64, tol: f64) -> Check {
        Check { anchor: anchor.into(), pass: err <= tol, residual: err, detail: format!("tol {tol:e}") }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub kind: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(kind: &str, checks: Vec<Check>, result: Value) -> Report {
        Report { kind: kind.into(), pass: checks.iter().all(|c| c.pass), checks, result, timing: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let field = |s: &String| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.clone()
            }
        };
        let mut out = String::new();
        for r in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&r.iter().map(field).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// Pretty JSON; `serde_json` maps keep keys sorted, so output is stable.
pub fn to_json<T: Serialize>(r: &T) -> String {
    let v = serde_json::to_value(r).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
    s.push('\n');
    s
}

pub fn write(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(d) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(d)?;
    }
    std::fs::write(path, text)
}

/// Real numbers printed with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}
