use std::path::Path;
use std::process::{Command, Output};

fn uniconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uniconv")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_spec(dir: &Path, body: &str) -> String {
    let p = dir.join("spec.json");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const INVERSE_SQUARE: &str = r#"{
    "space": {"kind": "circle"},
    "family": {"builtin": "inverse-square-rotation"},
    "check": {"horizon": 400, "tail_window": 100, "grid": 8, "max_period": 20},
    "properties": ["equicontinuity", "periodic-points", "sensitivity"]
}"#;

#[test]
fn lists_the_catalog() {
    let o = uniconv(&["list"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for id in ["alternating-rotation", "inverse-square-rotation", "perturbed-doubling", "plateau-tent", "odometer-deletion"] {
        assert!(out.contains(id), "{id}");
    }
}

#[test]
fn reproduce_matches_golden() {
    let o = uniconv(&["reproduce", "plateau-tent"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("golden: match"));
}

#[test]
fn reproduce_table_is_the_golden() {
    let o = uniconv(&["reproduce", "perturbed-doubling", "--table"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), include_str!("../../core/goldens/perturbed-doubling.json"));
}

#[test]
fn overridden_reproduce_skips_the_golden() {
    let o = uniconv(&["reproduce", "plateau-tent", "--horizon", "300"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("golden: skipped"));
}

#[test]
fn unknown_scenario_is_a_config_error() {
    assert_eq!(uniconv(&["reproduce", "logistic"]).status.code(), Some(3));
}

#[test]
fn run_emits_requested_formats() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), INVERSE_SQUARE);
    let out = dir.path().join("out");
    let o = uniconv(&["run", &spec, "--out", out.to_str().unwrap(), "--format", "csv", "--format", "plotdata"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(out.join("deviation.dat").exists());
    assert!(!out.join("report.json").exists());
}

#[test]
fn bad_config_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), INVERSE_SQUARE);
    assert_eq!(uniconv(&["run", &spec, "--eps", "0.9"]).status.code(), Some(3));
    let bad = write_spec(dir.path(), r#"{"space": {"kind": "circle"}, "family": {"builtin": "nope"}}"#);
    assert_eq!(uniconv(&["run", &bad]).status.code(), Some(3));
    let o = uniconv(&["run", "/nonexistent/spec.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn check_runs_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), INVERSE_SQUARE);
    let o = uniconv(&["check", "equicontinuity", &spec]);
    assert!(o.status.success());
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["mode"], "non-autonomous");
    assert_eq!(lines[1]["verdict"]["outcome"], "holds");
    assert_eq!(uniconv(&["check", "chaos", &spec]).status.code(), Some(3));
}

#[test]
fn bound_reports_the_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), INVERSE_SQUARE);
    let out = dir.path().join("b");
    let o = uniconv(&["bound", &spec, "--n", "5", "--k", "10", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("violations=0"));
    let csv = std::fs::read_to_string(out.join("collective.csv")).unwrap();
    assert!(csv.starts_with("n,k,E,bound,holds"));
}
