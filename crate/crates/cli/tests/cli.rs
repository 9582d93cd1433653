use qaffine::braiding::solve_braiding;
use qaffine::findim::build_simple;
use qaffine::scalars::Scalar;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qaffine"))
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("qaffine-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let o: Output = bin().args(args).output().unwrap();
    let v = serde_json::from_slice(&o.stdout).unwrap_or(Value::Null);
    (o.status.code().unwrap(), v, String::from_utf8_lossy(&o.stderr).into_owned())
}

fn all_pass(v: &Value) -> bool {
    v["pass"].as_bool().unwrap() && v["checks"].as_array().unwrap().iter().all(|c| c["pass"].as_bool().unwrap() && !c["anchor"].as_str().unwrap().is_empty())
}

#[test]
fn rmatrix_series_round_trips() {
    let (code, v, _) = run(&["rmatrix", "--X", "V1", "--Y", "V1", "--order", "6", "--no-timing"]);
    assert_eq!(code, 0);
    assert!(all_pass(&v));
    assert!(v.get("timing").is_none());
    let x = build_simple(1).unwrap();
    let want = solve_braiding(&x, &x, 6).unwrap().gauged().unwrap().series;
    let got = v["result"]["series"].as_array().unwrap();
    assert_eq!(got.len(), 6);
    for (k, m) in got.iter().enumerate() {
        for (i, row) in m.as_array().unwrap().iter().enumerate() {
            for (j, e) in row.as_array().unwrap().iter().enumerate() {
                let s: Scalar = e.as_str().unwrap().parse().unwrap();
                assert_eq!(&s, want.coeffs[k].get(i, j));
            }
        }
    }
}

#[test]
fn rmatrix_pole_table_sorted() {
    let d = tmp("poles");
    let csv = d.join("poles.csv");
    let (code, v, _) = run(&["rmatrix", "--order", "16", "--qt", "0.3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(v["result"]["fit"]["certified"].as_bool().unwrap());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mods: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(mods.len(), 4);
    assert!(mods.windows(2).all(|w| w[0] <= w[1]));
    assert!(mods.iter().all(|m| (m - 0.3f64.powi(-2)).abs() < 1e-8));
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(run(&["rmatrix", "--order", "25"]).0, 2);
    // |q̃² z| = 0.9
    assert_eq!(run(&["rmatrix", "--qt", "0.3", "--z", "10"]).0, 2);
    assert_eq!(run(&["rmatrix", "--qt", "0.3", "--z", "20"]).0, 0);
    assert_eq!(run(&["verify-all", "--level", "cluster"]).0, 2);
    assert_eq!(run(&["qdiff", "--system", "/no/such/file.json"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

fn write(d: &std::path::Path, name: &str, text: &str) -> String {
    let p = d.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn qdiff_continuation_and_ladder() {
    let d = tmp("qdiff");
    let euler = write(&d, "euler.json", r#"{"p": "1/2", "phi": [["1/(1-t)"]]}"#);
    let (code, v, _) = run(&["qdiff", "--system", &euler, "--continue", "2.0"]);
    assert_eq!(code, 0);
    let got = v["result"]["continue"]["value"][0][0][0].as_f64().unwrap();
    let direct: f64 = (0..400).map(|k| 1.0 - 2.0 * 0.5f64.powi(k)).product();
    assert!((got - direct).abs() < 1e-10);
    assert_eq!(v["result"]["poles"].as_array().unwrap().len(), 0);

    let inv = write(&d, "inv.json", r#"{"p": "1/2", "phi": [["1-t"]]}"#);
    let csv = d.join("ladder.csv");
    let (code, v, _) = run(&["qdiff", "--system", &inv, "--continue", "4.0", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["continue"]["pole"], Value::Bool(true));
    assert_eq!(v["result"]["continue"]["k"], 2);
    let rows: Vec<Vec<String>> = std::fs::read_to_string(&csv).unwrap().lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    let mods: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(mods, vec![1.0, 2.0, 4.0]);
    assert!(rows.iter().all(|r| r[6] == "true"));
}

#[test]
fn resonance_is_check_failure() {
    let d = tmp("res");
    let s = write(&d, "res.json", r#"{"p": "1/2", "phi": [["1", "t"], ["t", "2"]], "psi": [["1", "0"], ["0", "2"]]}"#);
    assert_eq!(run(&["qdiff", "--system", &s]).0, 1);
}

#[test]
fn config_files() {
    let d = tmp("cfg");
    write(&d, "sys.json", r#"{"p": "qt^2", "phi": [["1/(1-t)"]], "assign": {"qt": 0.5}}"#);
    let one = write(&d, "one.json", r#"{"kind": "rmatrix"}"#);
    let (code, v, _) = run(&["run", &one]);
    assert_eq!(code, 0);
    assert_eq!(v["kind"], "rmatrix");
    let many = write(
        &d,
        "many.json",
        r#"{"jobs": [{"kind": "qdiff", "system": "sys.json", "output": {"csv": "out/poles.csv"}}, {"kind": "coinv", "x": "V2", "shift": 0, "order": 2}, {"kind": "sugawara", "weight": "b", "order": 3}]}"#,
    );
    let (code, v, _) = run(&["run", &many, "--no-timing"]);
    assert_eq!(code, 0);
    let kinds: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, vec!["qdiff", "coinv", "sugawara"]);
    assert!(v["reports"].as_array().unwrap().iter().all(all_pass));
    assert_eq!(v["reports"][1]["result"]["c_dim"], 2);
    assert!(d.join("out/poles.csv").is_file());
    // identical config, identical bytes
    let a = bin().args(["run", &many, "--no-timing"]).output().unwrap().stdout;
    let b = bin().args(["run", &many, "--no-timing"]).output().unwrap().stdout;
    assert_eq!(a, b);

    let empty = write(&d, "empty.json", r#"{"jobs": []}"#);
    let (code, v, _) = run(&["run", &empty]);
    assert_eq!((code, v), (0, serde_json::json!({ "reports": [] })));

    let bad = write(&d, "bad.json", r#"{"jobs": [{"kind": "rmatrix", "order": 99}, {"kind": "qdiff", "colour": 1}]}"#);
    let (code, _, err) = run(&["run", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("jobs[0].order") && err.contains("jobs[1].schema"), "{err}");
}

#[test]
fn verify_all_desk() {
    let d = tmp("verify");
    let csv = d.join("criteria.csv");
    let (code, v, err) = run(&["verify-all", "--level", "desk", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(all_pass(&v));
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 9);
    assert_eq!(err.lines().filter(|l| l.starts_with("criterion")).count(), 9);
    assert!(v["timing"]["total_seconds"].as_f64().unwrap() > 0.0);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 10);
}
