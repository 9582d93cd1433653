//! Job configuration: loading, defaults and validation against the desk bounds.

use num_complex::Complex64;
use qaffine::findim::{build_simple, Module};
use qaffine::rootdata::{RootDatum, Weight};
use qaffine::scalars::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JobKind {
    Rmatrix,
    Sugawara,
    Coinv,
    Qdiff,
    VerifyAll,
}

impl JobKind {
    pub fn name(self) -> &'static str {
        match self {
            JobKind::Rmatrix => "rmatrix",
            JobKind::Sugawara => "sugawara",
            JobKind::Coinv => "coinv",
            JobKind::Qdiff => "qdiff",
            JobKind::VerifyAll => "verify-all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Real(f64),
    Complex([f64; 2]),
}

impl Point {
    pub fn value(self) -> Complex64 {
        match self {
            Point::Real(x) => Complex64::new(x, 0.0),
            Point::Complex([a, b]) => Complex64::new(a, b),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default)]
    pub json: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub kind: JobKind,
    /// `affine-sl2` or a path to a root-datum JSON file.
    #[serde(default = "default_datum")]
    pub datum: String,
    #[serde(default)]
    pub x: Option<String>,
    #[serde(default)]
    pub y: Option<String>,
    #[serde(default)]
    pub order: Option<usize>,
    /// Base weight of the Verma module for `sugawara`, e.g. `a` or `a+2w`.
    #[serde(default)]
    pub weight: Option<String>,
    /// `b − a` in units of ω for `coinv`.
    #[serde(default)]
    pub shift: Option<i32>,
    #[serde(default)]
    pub fit_degree: Option<usize>,
    #[serde(default)]
    pub system: Option<PathBuf>,
    #[serde(default, rename = "continue")]
    pub continue_to: Option<Point>,
    #[serde(default)]
    pub level: Option<String>,
    #[serde(default)]
    pub assign: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: Output,
}

fn default_datum() -> String {
    "affine-sl2".into()
}

impl JobConfig {
    pub fn new(kind: JobKind) -> JobConfig {
        JobConfig {
            kind,
            datum: default_datum(),
            x: None,
            y: None,
            order: None,
            weight: None,
            shift: None,
            fit_degree: None,
            system: None,
            continue_to: None,
            level: None,
            assign: BTreeMap::new(),
            output: Output::default(),
        }
    }
}

/// Inclusive order bounds per job kind.
pub fn order_bounds(kind: JobKind) -> (usize, usize) {
    match kind {
        JobKind::Rmatrix => (1, 24),
        JobKind::Sugawara => (1, 5),
        JobKind::Coinv => (1, 3),
        JobKind::Qdiff => (2, 400),
        JobKind::VerifyAll => (0, 0),
    }
}

pub fn default_order(kind: JobKind) -> usize {
    match kind {
        JobKind::Rmatrix => 6,
        JobKind::Sugawara => 4,
        JobKind::Coinv => 3,
        JobKind::Qdiff => 60,
        JobKind::VerifyAll => 0,
    }
}

/// `V<m>[*][@u]` factors joined by `(x)`, or `1` for the trivial module.
pub fn parse_module(spec: &str) -> Result<Module, String> {
    let mut acc: Option<Module> = None;
    for f in spec.split("(x)") {
        let f = f.trim();
        let (body, twist) = match f.split_once('@') {
            Some((b, t)) => (b.trim(), Some(t.trim())),
            None => (f, None),
        };
        let (body, dual) = match body.strip_suffix('*') {
            Some(b) => (b, true),
            None => (body, false),
        };
        let mut m = if body == "1" {
            Module::trivial()
        } else {
            let n: usize = body.strip_prefix('V').and_then(|d| d.parse().ok()).ok_or_else(|| format!("bad module factor `{f}`"))?;
            build_simple(n).map_err(|e| format!("`{f}`: {e}"))?
        };
        if dual {
            m = m.dual();
        }
        if let Some(t) = twist {
            let u: Scalar = t.parse().map_err(|e| format!("twist `{t}`: {e}"))?;
            if u.is_zero() {
                return Err(format!("twist `{t}` is zero"));
            }
            m = m.twist(&u, false);
        }
        acc = Some(match acc {
            None => m,
            Some(a) => a.tensor(&m),
        });
    }
    acc.ok_or_else(|| "empty module spec".into())
}

/// `a`, `b`, `0`, `kw` and sums such as `a+2w` or `b-1w`.
pub fn parse_weight(s: &str) -> Result<Weight, String> {
    let mut w = Weight::ZERO;
    let t = s.replace(' ', "").replace('-', "+-");
    for part in t.split('+').filter(|p| !p.is_empty()) {
        let (neg, p) = match part.strip_prefix('-') {
            Some(p) => (true, p),
            None => (false, part),
        };
        let sign = if neg { -1 } else { 1 };
        let term = match p {
            "a" => Weight::new([sign, 0], 0),
            "b" => Weight::new([0, sign], 0),
            "0" => Weight::ZERO,
            _ => {
                let k: i32 = p.strip_suffix('w').and_then(|k| if k.is_empty() { Some(1) } else { k.parse().ok() }).ok_or_else(|| format!("bad weight term `{part}` in `{s}`"))?;
                Weight::omega(sign * k)
            }
        };
        w = w.add(term);
    }
    Ok(w)
}

fn check_datum(d: &str) -> Result<(), String> {
    if d == "affine-sl2" {
        return Ok(());
    }
    let text = std::fs::read_to_string(d).map_err(|e| format!("datum: {d}: {e}"))?;
    let r = RootDatum::from_json(&text).map_err(|e| format!("datum: {e}"))?;
    let v = r.validate();
    if !v.pass {
        return Err(format!("datum: {}", v.failures.join("; ")));
    }
    if r.pairing != RootDatum::affine_sl2().pairing {
        return Err("datum: only the affine sl2 pairing is supported by the module builders".into());
    }
    Ok(())
}

/// Checks every field and lists all offending ones.
pub fn validate(c: &JobConfig) -> Result<(), Vec<String>> {
    let mut errs = Vec::new();
    if let Err(e) = check_datum(&c.datum) {
        errs.push(e);
    }
    let (lo, hi) = order_bounds(c.kind);
    let needs = |field: &str, present: bool, errs: &mut Vec<String>| {
        if !present {
            errs.push(format!("{field}: required for {}", c.kind.name()));
        }
    };
    let forbid = |field: &str, present: bool, errs: &mut Vec<String>| {
        if present {
            errs.push(format!("{field}: not used by {}", c.kind.name()));
        }
    };
    match c.kind {
        JobKind::VerifyAll => {
            forbid("order", c.order.is_some(), &mut errs);
            match c.level.as_deref().unwrap_or("desk").parse::<qaffine::verify::Level>() {
                Ok(_) => {}
                Err(e) => errs.push(format!("level: {e}")),
            }
        }
        _ => {
            if let Some(n) = c.order {
                if n < lo || n > hi {
                    errs.push(format!("order: {n} outside the desk bounds {lo}..={hi} for {}", c.kind.name()));
                }
            }
            forbid("level", c.level.is_some(), &mut errs);
        }
    }
    match c.kind {
        JobKind::Rmatrix => {
            for (f, v) in [("x", &c.x), ("y", &c.y)] {
                if let Some(s) = v {
                    if let Err(e) = parse_module(s) {
                        errs.push(format!("{f}: {e}"));
                    }
                }
            }
            if let Some(d) = c.fit_degree {
                if !(1..=8).contains(&d) {
                    errs.push(format!("fit_degree: {d} outside 1..=8"));
                }
            }
        }
        JobKind::Sugawara => {
            if let Some(w) = &c.weight {
                match parse_weight(w) {
                    Ok(w) if !w.has_base() => errs.push(format!("weight: `{w}` needs a generic base point a or b")),
                    Ok(_) => {}
                    Err(e) => errs.push(format!("weight: {e}")),
                }
            }
        }
        JobKind::Coinv => {
            if let Some(s) = &c.x {
                if let Err(e) = parse_module(s) {
                    errs.push(format!("x: {e}"));
                }
            }
        }
        JobKind::Qdiff => {
            needs("system", c.system.is_some(), &mut errs);
            if let Some(p) = &c.system {
                if !p.is_file() {
                    errs.push(format!("system: {} is not a file", p.display()));
                }
            }
        }
        JobKind::VerifyAll => {}
    }
    if c.kind != JobKind::Rmatrix {
        forbid("y", c.y.is_some(), &mut errs);
        forbid("fit_degree", c.fit_degree.is_some(), &mut errs);
    }
    if !matches!(c.kind, JobKind::Rmatrix | JobKind::Coinv) {
        forbid("x", c.x.is_some(), &mut errs);
    }
    if c.kind != JobKind::Coinv {
        forbid("shift", c.shift.is_some(), &mut errs);
    }
    if c.kind != JobKind::Sugawara {
        forbid("weight", c.weight.is_some(), &mut errs);
    }
    if c.kind != JobKind::Qdiff {
        forbid("system", c.system.is_some(), &mut errs);
        forbid("continue", c.continue_to.is_some(), &mut errs);
    }
    errs.extend(validate_assign(&c.assign));
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

/// `0 < |q̃| < 1`, and `|q̃² z| > 1` when `z` is given.
pub fn validate_assign(a: &BTreeMap<String, f64>) -> Vec<String> {
    let mut errs = Vec::new();
    for k in a.keys() {
        if k != "qt" && k != "z" {
            errs.push(format!("assign.{k}: only qt and z can be assigned"));
        }
    }
    let qt = a.get("qt");
    if let Some(&q) = qt {
        if !(q.abs() > 0.0 && q.abs() < 1.0) {
            errs.push(format!("assign.qt: |qt| = {} must lie in (0, 1)", q.abs()));
        }
    }
    if let Some(&z) = a.get("z") {
        match qt {
            None => errs.push("assign.z: needs assign.qt".into()),
            Some(&q) if (q * q * z).abs() <= 1.0 => errs.push(format!("assign.z: |qt^2 z| = {} must exceed 1", (q * q * z).abs())),
            _ => {}
        }
    }
    errs
}

/// A config file holds one job or `{"jobs": [...]}`.
pub fn config_load(path: &Path) -> Result<Vec<JobConfig>, Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| vec![format!("{}: {e}", path.display())])?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| vec![format!("{}: {e}", path.display())])?;
    let items: Vec<(String, serde_json::Value)> = match v.get("jobs") {
        Some(serde_json::Value::Array(a)) if v.as_object().is_some_and(|o| o.len() == 1) => a.iter().enumerate().map(|(i, j)| (format!("jobs[{i}]"), j.clone())).collect(),
        Some(_) => return Err(vec!["jobs: must be the only key and hold an array".into()]),
        None => vec![(String::new(), v)],
    };
    let base = path.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    let mut errs = Vec::new();
    for (prefix, j) in items {
        let tag = |e: String| if prefix.is_empty() { e } else { format!("{prefix}.{e}") };
        match serde_json::from_value::<JobConfig>(j) {
            Ok(mut c) => {
                // relative paths are resolved against the config's directory
                for p in [&mut c.system, &mut c.output.json, &mut c.output.csv].into_iter().flatten() {
                    if p.is_relative() {
                        *p = base.join(&*p);
                    }
                }
                match validate(&c) {
                    Ok(()) => out.push(c),
                    Err(es) => errs.extend(es.into_iter().map(tag)),
                }
            }
            Err(e) => errs.push(tag(format!("schema: {e}"))),
        }
    }
    if errs.is_empty() {
        Ok(out)
    } else {
        Err(errs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(parse_weight("a").unwrap(), Weight::base_a());
        assert_eq!(parse_weight("a+2w").unwrap(), Weight::new([1, 0], 2));
        assert_eq!(parse_weight("b - 3w").unwrap(), Weight::new([0, 1], -3));
        assert_eq!(parse_weight("-w").unwrap(), Weight::omega(-1));
        assert!(parse_weight("a+c").is_err());
    }

    #[test]
    fn modules() {
        assert_eq!(parse_module("V1(x)V2").unwrap().dim(), 6);
        assert_eq!(parse_module("V2*").unwrap(), build_simple(2).unwrap().dual());
        assert_eq!(parse_module("1").unwrap().dim(), 1);
        let u: Scalar = "u".parse().unwrap();
        assert_eq!(parse_module("V1@u").unwrap(), build_simple(1).unwrap().twist(&u, false));
        assert!(parse_module("V1@0").is_err());
        assert!(parse_module("W1").is_err());
    }

    #[test]
    fn assignments() {
        let a = |v: &[(&str, f64)]| v.iter().map(|(k, x)| (k.to_string(), *x)).collect::<BTreeMap<_, _>>();
        assert!(validate_assign(&a(&[("qt", 0.3), ("z", 20.0)])).is_empty());
        // |qt² z| = 0.9 ≤ 1
        assert_eq!(validate_assign(&a(&[("qt", 0.3), ("z", 10.0)])).len(), 1);
        assert_eq!(validate_assign(&a(&[("qt", -0.3), ("z", -1.0 / 0.09)])).len(), 1);
        assert_eq!(validate_assign(&a(&[("qt", 1.0)])).len(), 1);
        assert_eq!(validate_assign(&a(&[("al", 0.5)])).len(), 1);
    }

    #[test]
    fn bounds() {
        let mut c = JobConfig::new(JobKind::Rmatrix);
        c.order = Some(24);
        assert!(validate(&c).is_ok());
        c.order = Some(25);
        assert!(validate(&c).is_err());
        let mut c = JobConfig::new(JobKind::VerifyAll);
        assert!(validate(&c).is_ok());
        c.order = Some(3);
        assert!(validate(&c).is_err());
    }
}
