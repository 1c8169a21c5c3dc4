use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn stokes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stokes")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr carries a JSON error")
}

#[test]
fn solve_prints_exact_coefficients() {
    let out = stokes(&["solve", path_str(&data("EX1.json")), "--order", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["n,h1_num,h1_den,h2_num,h2_den", "1,-1,1,0,1", "2,-1,1,1,1", "3,-1,1,3,1", "4,0,1,10,1"]);
}

#[test]
fn invalid_spec_exits_one_with_report() {
    let out = stokes(&["validate", path_str(&data("bad.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let clauses = report["validate"]["clauses"].as_array().unwrap();
    assert!(clauses.iter().any(|c| c["passed"] == false));

    let out = stokes(&["solve", path_str(&data("bad.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "validation");
    assert_eq!(err["exit_code"], 1);
    assert!(err["report"].is_object());
}

#[test]
fn malformed_rational_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(data("EX1.json")).unwrap()).unwrap();
    v["a"][0] = Value::String("1/x".into());
    std::fs::write(&spec, v.to_string()).unwrap();
    let out = stokes(&["solve", path_str(&spec)]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "parse");
    assert_eq!(err["path"], "$.a[0]");
}

#[test]
fn missing_file_is_io_error() {
    let out = stokes(&["solve", "/nonexistent/spec.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "io");
}

#[test]
fn summing_along_a_singular_direction_is_a_numerical_failure() {
    let out = stokes(&["sum", path_str(&data("EX1.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "near_pole");
}

#[test]
fn every_command_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let ex1 = data("EX1.json");
    let commands = ["validate", "solve", "shift", "borel", "sum", "stokes", "compose", "separate", "witness"];
    for cmd in commands {
        let theta = if cmd == "sum" { "0.5" } else { "0" };
        let out = stokes(&[cmd, path_str(&ex1), "--poly", "0,1", "--ray", "0.3", "--theta", theta, "--out", path_str(dir.path())]);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("{cmd}.json"))).unwrap()).unwrap();
        assert_eq!(report["command"], cmd);
    }
    let out = stokes(&["gauge", path_str(&data("EX2.json")), "--out", path_str(dir.path())]);
    assert!(out.status.success());
    assert!(dir.path().join("gauge.json").exists());
}

#[test]
fn gauge_pullback_spec_round_trips() {
    let out = stokes(&["gauge", path_str(&data("EX2.json"))]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("pullback.json");
    std::fs::write(&spec, report["gauge"]["interlaced"].to_string()).unwrap();
    let out = stokes(&["validate", path_str(&spec)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = stokes(&["solve", path_str(&spec), "--order", "6"]);
    assert!(out.status.success());
}

#[test]
fn composition_check_with_relation() {
    let out = stokes(&[
        "compose",
        path_str(&data("EX1.json")),
        "--poly",
        "0,1",
        "--relation",
        path_str(&data("relation_sum.json")),
        "--ray",
        "0.3",
        "--xmax",
        "0.3",
        "--samples",
        "4",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let err = report["compose"]["stokes_check"]["max_relative_error"].as_f64().unwrap();
    assert!(err < 0.05, "{err}");
}

#[test]
fn stokes_runs_are_deterministic() {
    let ex1 = data("EX1.json");
    let args = ["stokes", path_str(&ex1), "--ray", "0.3", "--order", "80", "--samples", "6"];
    let a = stokes(&args);
    let b = stokes(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
