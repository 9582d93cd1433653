//! The five job kinds.

use crate::config::{default_order, parse_module, parse_weight, JobConfig, JobKind};
use crate::report::{num, Check, Report, Table};
use num_complex::Complex64;
use qaffine::braiding::{intertwiner_residual, oracle_gauged, pole_analysis, rational_fit, solve_braiding, BraidOutcome};
use qaffine::cat_o::{intertwining_residuals, spectrum, verma_va, OmegaRoute, VermaLabel};
use qaffine::coinv::{check_phi, u0_coinvariants, CoinvSpace, MidSlot, Mode, OuterSlot};
use qaffine::findim::{check_relations, Module};
use qaffine::linalg::{Mat, SerMat};
use qaffine::qdiff::{certify_convergence, continue_meromorphic, functional_residual, load_system, pole_table, series_solve, CMat, Continuation, QdiffError};
use qaffine::rootdata::Weight;
use qaffine::scalars::{assignment, Scalar, QT, Z};
use qaffine::verify::{run_criterion, Level};
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Config(String),
    /// Exit 3.
    Internal(String),
}

pub struct JobOutput {
    pub report: Report,
    pub table: Option<Table>,
}

fn mat_json(m: &Mat) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| Value::String(m.get(i, j).to_string())).collect())).collect())
}

fn ser_json(s: &SerMat) -> Value {
    Value::Array(s.coeffs.iter().map(mat_json).collect())
}

fn cmat_json(m: &CMat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect())).collect())
}

fn label(l: &VermaLabel) -> String {
    let w: Vec<String> = l.word.iter().map(|g| format!("F{g}")).collect();
    let mut s = if w.is_empty() { "1".to_string() } else { w.join(" ") };
    if l.nil > 0 {
        s.push_str(&format!(" [n{}]", l.nil));
    }
    s
}

/// Relation failures on an input module mean a builder bug.
fn require_relations(name: &str, m: &Module) -> Result<(), Failure> {
    let r = check_relations(m, None);
    if r.all_pass() {
        Ok(())
    } else {
        Err(Failure::Internal(format!("{name} fails relations: {}", r.failures().join(", "))))
    }
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Internal(e.to_string())
}

fn numeric_assignment(c: &JobConfig) -> Option<[Complex64; 6]> {
    let qt = *c.assign.get("qt")?;
    let mut pairs = vec![(QT, Complex64::new(qt, 0.0))];
    if let Some(z) = c.assign.get("z") {
        pairs.push((Z, Complex64::new(*z, 0.0)));
    }
    Some(assignment(&pairs))
}

fn rmatrix(c: &JobConfig) -> Result<JobOutput, Failure> {
    let xs = c.x.clone().unwrap_or_else(|| "V1".into());
    let ys = c.y.clone().unwrap_or_else(|| "V1".into());
    let x = parse_module(&xs).map_err(Failure::Config)?;
    let y = parse_module(&ys).map_err(Failure::Config)?;
    require_relations("X", &x)?;
    require_relations("Y", &y)?;
    let n = c.order.unwrap_or(default_order(JobKind::Rmatrix));
    let mut checks = Vec::new();
    let mut result = json!({ "x": xs, "y": ys, "order": n });
    let s = match solve_braiding(&x, &y, n).map_err(internal)? {
        BraidOutcome::Gauged(s) => s,
        BraidOutcome::Lattice(b) => {
            checks.push(Check::flag("braiding solution rank 1", false, format!("lattice of rank {}", b.len())));
            result["lattice"] = Value::Array(b.iter().map(ser_json).collect());
            return Ok(JobOutput { report: Report::new("rmatrix", checks, result), table: None });
        }
    };
    checks.push(Check::flag("braiding solution rank 1", s.kernel_ranks.iter().all(|&r| r == 1), format!("{:?}", s.kernel_ranks)));
    checks.push(Check::exact("braiding intertwiner residual", intertwiner_residual(&s.series, &x, &y)));
    let o = oracle_gauged(&x, &y, n).map_err(internal)?;
    checks.push(Check::exact("braiding matches hom-space oracle", s.series.sub(&o).coeffs.iter().map(|m| m.nnz()).sum()));
    let fit = rational_fit(&s.series, c.fit_degree.unwrap_or(4));
    result["gauge"] = serde_json::to_value(s.gauge).unwrap();
    result["kernel_ranks"] = json!(s.kernel_ranks);
    result["series"] = ser_json(&s.series);
    result["fit"] = json!({
        "certified": fit.certified,
        "step": fit.step,
        "determined": fit.determined,
        "surplus": fit.surplus,
        "available": fit.available,
        "den": fit.den.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "num": fit.num.iter().map(mat_json).collect::<Vec<_>>(),
    });
    let mut table = None;
    if let Some(at) = numeric_assignment(c) {
        if fit.certified {
            let rep = pole_analysis(&fit, &at, 100.0, Some(&s.series));
            checks.push(Check::flag("fit: 0 not a pole", rep.zero_excluded, ""));
            let worst = rep.den_residuals.iter().copied().fold(0.0, f64::max);
            checks.push(Check::within("fit: poles at denominator roots", worst, 1e-8));
            let snap = |x: f64, m: f64| if x.abs() <= 1e-12 * m { 0.0 } else { x };
            let mut poles: Vec<(f64, f64)> = rep.poles.iter().map(|&(a, b)| (snap(a, a.hypot(b)), snap(b, a.hypot(b)))).collect();
            poles.sort_by(|a, b| Complex64::new(a.0, a.1).norm().total_cmp(&Complex64::new(b.0, b.1).norm()).then(a.0.total_cmp(&b.0)).then(a.1.total_cmp(&b.1)));
            let mut t = Table::new(&["re", "im", "modulus"]);
            for (re, im) in &poles {
                t.rows.push(vec![num(*re), num(*im), num(Complex64::new(*re, *im).norm())]);
            }
            result["poles"] = json!(poles);
            table = Some(t);
        } else {
            result["poles"] = Value::Null;
        }
    }
    Ok(JobOutput { report: Report::new("rmatrix", checks, result), table })
}

fn sugawara(c: &JobConfig) -> Result<JobOutput, Failure> {
    let w = parse_weight(c.weight.as_deref().unwrap_or("a")).map_err(Failure::Config)?;
    let n = c.order.unwrap_or(default_order(JobKind::Sugawara));
    let z = Scalar::var(Z);
    let m = verma_va(w, &z, n);
    let rel = check_relations(&m.module, m.inner_levels());
    if !rel.all_pass() {
        return Err(Failure::Internal(format!("Verma truncation fails relations: {}", rel.failures().join(", "))));
    }
    let mut checks = Vec::new();
    let r = m.omega(OmegaRoute::Recursion).map_err(internal)?;
    let d = m.omega(OmegaRoute::DualBasis).map_err(internal)?;
    checks.push(Check::exact("Omega: recursion and dual-basis routes agree", r.sub(&d).nnz()));
    let (t, route) = m.sugawara(w);
    for (name, nnz) in intertwining_residuals(&m.module, &t, None) {
        checks.push(Check::exact(format!("Sugawara intertwining {name}"), nnz));
    }
    let sp = spectrum(&t, &m.levels).map_err(internal)?;
    checks.push(Check::flag("Sugawara spectrum on (z^d q)^{2k} grid", sp.on_grid(&z), ""));
    checks.push(Check::flag("Sugawara level inclusion in q_1^k L_1", sp.inclusion_holds(&z), ""));
    let mut tbl = Table::new(&["level", "eigenvalue", "multiplicity"]);
    for (k, l) in sp.levels.iter().enumerate() {
        for (e, mult) in l {
            tbl.rows.push(vec![(k + 1).to_string(), e.to_string(), mult.to_string()]);
        }
    }
    let entries: Vec<Value> = (0..t.rows()).flat_map(|i| (0..t.cols()).map(move |j| (i, j))).filter(|&(i, j)| !t.get(i, j).is_zero()).map(|(i, j)| json!([i, j, t.get(i, j).to_string()])).collect();
    let result = json!({
        "weight": w.to_string(),
        "order": n,
        "dim": m.dim(),
        "route": format!("{route:?}"),
        "basis": m.labels.iter().map(label).collect::<Vec<_>>(),
        "levels": m.levels,
        "t_entries": entries,
        "spectrum": sp.levels.iter().map(|l| l.iter().map(|(e, k)| json!([e.to_string(), k])).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(JobOutput { report: Report::new("sugawara", checks, result), table: Some(tbl) })
}

fn coinv(c: &JobConfig) -> Result<JobOutput, Failure> {
    let xs = c.x.clone().unwrap_or_else(|| "V1".into());
    let x = parse_module(&xs).map_err(Failure::Config)?;
    require_relations("X", &x)?;
    if x.weights.iter().any(|w| w.has_base()) {
        return Err(Failure::Config("x: twisted weights are not supported here".into()));
    }
    let shift = c.shift.unwrap_or_else(|| x.weights.iter().map(|w| w.off).max().unwrap_or(0));
    let n = c.order.unwrap_or(default_order(JobKind::Coinv));
    let a = Weight::base_a();
    let b = a.add(Weight::omega(shift));
    let u0 = u0_coinvariants(&[&[a], &x.weights, &[b.neg()]]);
    let want = x.weights.iter().filter(|w| **w == Weight::omega(shift)).count();
    let z = Scalar::var(Z);
    let depth = 4;
    let vv = verma_va(a, &z, depth);
    let vb = verma_va(b, &z, depth);
    let s = CoinvSpace::new(OuterSlot::left(&vv), MidSlot::twisted(&x, n), OuterSlot::right(&vb), Mode::Gamma(n)).map_err(internal)?;
    let mut checks = vec![
        Check::flag("U0 coinvariants: dimension equals weight multiplicity", u0.dim() == want, format!("{} vs {want}", u0.dim())),
        Check::flag("U0 coinvariants: rank cross-check", u0.consistent(), ""),
        Check::flag("order-n coinvariants: free of rank n*dim", s.rank() == want && s.c_dim() == n * want, format!("rank {}, dim {}", s.rank(), s.c_dim())),
        Check::exact("order-n coinvariants: relations project to 0", s.annihilation_failures()),
        Check::flag("order-n coinvariants: projection retracts onto representatives", s.retraction_ok(), ""),
    ];
    if want > 0 {
        let r = check_phi(&vv, &x, &vb, a, n).map_err(internal)?;
        checks.push(Check { anchor: "phi = id on order-n coinvariants".into(), pass: r.pass(), residual: (r.failures + r.annihilation_failures) as f64, detail: format!("{} entries compared", r.checked) });
    }
    let mut tbl = Table::new(&["index", "left", "middle", "right"]);
    let reps: Vec<Value> = s
        .reps
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let row = [label(&vv.labels[r[0]]), format!("{}", x.weights[r[1]]), label(&vb.labels[r[2]])];
            tbl.rows.push(vec![i.to_string(), row[0].clone(), row[1].clone(), row[2].clone()]);
            json!(row)
        })
        .collect();
    let result = json!({
        "x": xs,
        "shift": shift,
        "order": n,
        "u0_dim": u0.dim(),
        "rank": s.rank(),
        "c_dim": s.c_dim(),
        "representatives": reps,
    });
    Ok(JobOutput { report: Report::new("coinv", checks, result), table: Some(tbl) })
}

fn qdiff(c: &JobConfig) -> Result<JobOutput, Failure> {
    let path = c.system.as_ref().ok_or_else(|| Failure::Config("system: required".into()))?;
    let spec = load_system(path).map_err(|e| Failure::Config(format!("system: {e}")))?;
    let sys = spec.numeric().map_err(|e| Failure::Config(format!("system: {e}")))?;
    let order = c.order.unwrap_or(default_order(JobKind::Qdiff));
    let mut result = json!({ "p": [sys.p.re, sys.p.im], "order": order, "size": sys.n });
    let sol = match series_solve(&sys, order) {
        Ok(s) => s,
        Err(QdiffError::Resonance { j }) => {
            let checks = vec![Check::flag("q-difference: no resonance", false, format!("order {j}"))];
            return Ok(JobOutput { report: Report::new("qdiff", checks, result), table: None });
        }
        Err(e) => return Err(internal(e)),
    };
    let cert = certify_convergence(&sys, &sol, spec.radius);
    let r = cert.eval_radius().min(0.9 * cert.holomorphy_radius);
    // fixed sample points in the disc
    let worst = (0..16)
        .map(|k| {
            let t = Complex64::from_polar(r * (k + 1) as f64 / 17.0, 2.399963229728653 * k as f64);
            functional_residual(&sys, &sol, t)
        })
        .fold(0.0, f64::max);
    let checks = vec![
        Check::within("q-difference: functional residual inside disc", worst, 1e-10),
        Check::flag("q-difference: majorant radius bound", cert.respects_majorant_bound, format!("estimated {:.6e}", cert.estimated_radius)),
    ];
    result["certificate"] = serde_json::to_value(&cert).unwrap();
    result["respects_stated_bound"] = json!(cert.respects_stated_bound);
    result["coefficients"] = Value::Array(sol.coeffs.iter().take(8).map(cmat_json).collect());
    let mut reach: f64 = 2.0;
    if let Some(p) = c.continue_to {
        let t = p.value();
        reach = reach.max(t.norm());
        result["continue"] = match continue_meromorphic(&sys, &sol, cert.eval_radius(), t) {
            Continuation::Value { value, steps } => json!({ "t": [t.re, t.im], "value": cmat_json(&value), "steps": steps }),
            Continuation::Pole { k, singularity } => json!({ "t": [t.re, t.im], "pole": true, "k": k, "singularity": [singularity.re, singularity.im] }),
        };
    }
    let poles = pole_table(&sys, &sol, cert.eval_radius(), reach);
    let mut tbl = Table::new(&["re", "im", "modulus", "k", "base_re", "base_im", "confirmed"]);
    for p in &poles {
        tbl.rows.push(vec![num(p.re), num(p.im), num(p.modulus), p.k.to_string(), num(p.base_re), num(p.base_im), p.confirmed.to_string()]);
    }
    result["poles"] = serde_json::to_value(&poles).unwrap();
    Ok(JobOutput { report: Report::new("qdiff", checks, result), table: Some(tbl) })
}

fn verify_all(c: &JobConfig, timing: &mut Vec<(String, f64)>) -> Result<JobOutput, Failure> {
    let _level: Level = c.level.as_deref().unwrap_or("desk").parse().map_err(Failure::Config)?;
    let mut checks = Vec::new();
    let mut crit = Vec::new();
    let mut tbl = Table::new(&["criterion", "title", "pass", "checks"]);
    for id in 1..=9 {
        let r = run_criterion(id);
        eprintln!("{}", r.line());
        for l in &r.checks {
            checks.push(Check { anchor: format!("criterion {id}: {}", l.anchor), pass: l.pass, residual: l.residual, detail: l.detail.clone() });
        }
        if let Some(e) = &r.error {
            checks.push(Check::flag(format!("criterion {id}: evaluated"), false, e.clone()));
        }
        checks.push(Check::flag(format!("criterion {id}: within {}s budget", r.budget_seconds), r.in_budget(), ""));
        timing.push((format!("criterion {id}"), r.seconds));
        tbl.rows.push(vec![id.to_string(), r.title.clone(), r.pass().to_string(), r.checks.len().to_string()]);
        crit.push(json!({ "id": id, "title": r.title, "pass": r.pass(), "checks": r.checks.len(), "budget_seconds": r.budget_seconds }));
    }
    Ok(JobOutput { report: Report::new("verify-all", checks, json!({ "level": "desk", "criteria": crit })), table: Some(tbl) })
}

pub fn run_job(c: &JobConfig, with_timing: bool) -> Result<JobOutput, Failure> {
    let start = Instant::now();
    let mut timing = Vec::new();
    let mut out = match c.kind {
        JobKind::Rmatrix => rmatrix(c),
        JobKind::Sugawara => sugawara(c),
        JobKind::Coinv => coinv(c),
        JobKind::Qdiff => qdiff(c),
        JobKind::VerifyAll => verify_all(c, &mut timing),
    }?;
    if with_timing {
        let mut m: std::collections::BTreeMap<String, f64> = timing.into_iter().collect();
        m.insert("total_seconds".into(), start.elapsed().as_secs_f64());
        out.report.timing = Some(m);
    }
    Ok(out)
}
