use std::process::{Command, Output};

use serde_json::Value;

fn dkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dkl")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn body(out: &Output) -> String {
    let mut v = json(out);
    v["timestamp"] = Value::Null;
    v.to_string()
}

const SMALL: [&str; 6] = ["--chart", "frw_flat", "--seed", "1", "--points", "3"];

#[test]
fn small_run_passes_with_exit_zero() {
    let out = dkl(&[&["verify-geometry"], &SMALL[..]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["tool"], "dkl");
    assert_eq!(v["command"], "verify-geometry");
    assert_eq!(v["summary"]["pass"], true);
    assert!(v["timestamp"].as_str().unwrap().starts_with("unix:"));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["chart"] == "frw_flat" && c["seed"] == 1));
}

#[test]
fn unknown_chart_is_a_config_error() {
    let out = dkl(&["verify-geometry", "--chart", "kerr"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("kerr"));
}

#[test]
fn invalid_values_and_usage_exit_two() {
    assert_eq!(dkl(&["sectors", "--points", "0"]).status.code(), Some(2));
    assert_eq!(dkl(&["sectors", "--mass", "-1"]).status.code(), Some(2));
    assert_eq!(dkl(&["sectors", "--seed", "x"]).status.code(), Some(2));
    assert_eq!(dkl(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn same_seed_gives_identical_bodies() {
    let args = [&["equivalence"], &SMALL[..]].concat();
    let (a, b) = (dkl(&args), dkl(&args));
    assert_eq!(body(&a), body(&b));
    // a different seed measures different fields
    let other = dkl(&["equivalence", "--chart", "frw_flat", "--seed", "2", "--points", "3"]);
    assert_ne!(body(&a), body(&other));
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# small run\ncharts = schwarzschild:M=0.5\nseeds = 4, 5\npoints = 2\nmass = 2.5\n").unwrap();
    let p = path.to_str().unwrap();

    let v = json(&dkl(&["compare-v", "--config", p]));
    assert_eq!(v["config"]["charts"], serde_json::json!(["schwarzschild:M=0.5"]));
    assert_eq!(v["config"]["seeds"], serde_json::json!([4, 5]));
    assert_eq!(v["config"]["points"], 2);
    assert_eq!(v["config"]["mass"].as_f64(), Some(2.5));

    let v = json(&dkl(&["compare-v", "--config", p, "--seed", "9", "--points", "1"]));
    assert_eq!(v["config"]["seeds"], serde_json::json!([9]));
    assert_eq!(v["config"]["points"], 1);
    assert_eq!(v["config"]["charts"], serde_json::json!(["schwarzschild:M=0.5"]));
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = dkl(&["verify-algebra", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "verify-algebra");
    assert!(v.get("config").is_none());
    assert_eq!(v["conventions"]["epsilon_trace_constant"], serde_json::json!([-2.0, 0.0]));
}

#[test]
fn failing_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strict.conf");
    let strict: String = ["algebra", "first_derivative", "curvature", "identity"]
        .iter()
        .map(|t| format!("tolerance.{t} = 1e-300\n"))
        .collect();
    std::fs::write(&path, strict).unwrap();
    let out = dkl(&["verify-geometry", "--chart", "schwarzschild", "--seed", "1", "--points", "4", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["summary"]["pass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}
