use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn hochkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hochkit")).args(args).env_remove("HOCHKIT_BUDGET").output().expect("spawn hochkit")
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn small_manifest() -> Value {
    json!({
        "p": 5,
        "cases": [
            {"name": "co", "check": "reduction_co", "inputs": {"S": "truncated_poly:2", "M": "k", "N": "k"}, "window": [-2, 2]},
            {"name": "ho", "check": "reduction_ho", "inputs": {"S": "split:2", "M": "S", "N": "k"}, "window": [-2, 2]},
            {"name": "hh", "check": "hochschild", "inputs": {"S": "truncated_poly:2", "cross_check": true}, "window": [0, 2]}
        ]
    })
}

#[test]
fn small_manifest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", &small_manifest());
    let out_json = dir.path().join("report.json");
    let o = hochkit(&["run", &m, "--no-timestamp", "-o", out_json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(&out_json).unwrap()).unwrap();
    let cases = report["cases"].as_array().unwrap();
    let names: Vec<&str> = cases.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["co", "ho", "hh"]);
    assert!(cases.iter().all(|c| c["verdict"] == "PASS"));
    assert!(report.get("timestamp").is_none());
    let tsv = fs::read_to_string(dir.path().join("report.tsv")).unwrap();
    assert!(tsv.starts_with("case\tmode\tdegree\tlhs\trhs\tverdict\n"));
    // k ⊗ RHom over k[x]/x^2: one class in each degree 0..2
    assert!(tsv.contains("co\tco\t2\t1\t1\tPASS"));
}

#[test]
fn file_references_are_inlined() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "alg.json", &json!("truncated_poly:2"));
    let m = json!({"cases": [{"name": "a", "check": "reduction_co", "inputs": {"S": {"file": "alg.json"}, "M": "S", "N": "S"}, "window": [0, 1]}]});
    let m = write(dir.path(), "m.json", &m);
    assert_eq!(hochkit(&["run", &m, "--no-timestamp"]).status.code(), Some(0));
}

#[test]
fn corrupted_algebra_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = json!({"dim": 2, "p": 5, "unit": [0, 1], "c": [[[1, 0], [0, 1]], [[0, 1], [1, 1]]], "commutative": true});
    let m = json!({"cases": [{"name": "bad", "check": "reduction_co", "inputs": {"S": bad, "M": "S", "N": "S"}}]});
    let m = write(dir.path(), "m.json", &m);
    let o = hochkit(&["run", &m]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn missing_files_exit_2() {
    assert_eq!(hochkit(&["run", "/definitely/not/here.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let m = json!({"cases": [{"name": "a", "check": "reduction_co", "inputs": {"S": {"file": "gone.json"}, "M": "S", "N": "S"}}]});
    let m = write(dir.path(), "m.json", &m);
    let o = hochkit(&["run", &m]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gone.json"));
}

#[test]
fn duplicate_names_and_unknown_checks_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let case = json!({"name": "a", "check": "reduction_co", "inputs": {"S": "k", "M": "S", "N": "S"}});
    let m = write(dir.path(), "dup.json", &json!({"cases": [case.clone(), case]}));
    assert_eq!(hochkit(&["run", &m]).status.code(), Some(2));
    let m = write(dir.path(), "unk.json", &json!({"cases": [{"name": "a", "check": "nope"}]}));
    assert_eq!(hochkit(&["run", &m]).status.code(), Some(2));
}

#[test]
fn budget_skips_unless_strict() {
    let dir = tempfile::tempdir().unwrap();
    let m = json!({"cases": [
        {"name": "big", "check": "reduction_co", "budget": 10, "inputs": {"S": "truncated_poly:3", "M": "k", "N": "k"}},
        {"name": "ok", "check": "reduction_co", "inputs": {"S": "k", "M": "S", "N": "S"}, "window": [0, 0]}
    ]});
    let m = write(dir.path(), "m.json", &m);
    let o = hochkit(&["run", &m, "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("SKIPPED(budget)"));
    assert_eq!(hochkit(&["run", &m, "--strict", "--no-timestamp"]).status.code(), Some(1));
}

#[test]
fn env_budget_overrides_case_budget() {
    let dir = tempfile::tempdir().unwrap();
    let m = json!({"cases": [{"name": "a", "check": "reduction_co", "budget": 10, "inputs": {"S": "truncated_poly:2", "M": "k", "N": "k"}, "window": [0, 1]}]});
    let m = write(dir.path(), "m.json", &m);
    let o = Command::new(env!("CARGO_BIN_EXE_hochkit")).args(["run", &m, "--strict"]).env("HOCHKIT_BUDGET", "1000000").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", &small_manifest());
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(hochkit(&["run", &m, "--no-timestamp", "--jobs", "1", "-o", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(hochkit(&["run", &m, "--no-timestamp", "--jobs", "4", "-o", b.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read(a.with_extension("tsv")).unwrap(), fs::read(b.with_extension("tsv")).unwrap());
}

#[test]
fn timestamp_present_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", &small_manifest());
    let out = dir.path().join("r.json");
    hochkit(&["run", &m, "-o", out.to_str().unwrap()]);
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report["timestamp"].is_u64());
    assert!(report["cases"][0]["wall_time"].is_f64());
}

#[test]
fn check_reduction_command() {
    let o = hochkit(&["check", "reduction", "--S", "truncated_poly:2", "--M", "k", "--N", "k", "--mode", "co", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(out.lines().count(), 10);
    let o = hochkit(&[
        "check",
        "reduction",
        "--S",
        "truncated_poly:4",
        "--R",
        "truncated_poly:2",
        "--map",
        "[[1,0,0,0],[0,0,1,0]]",
        "--basis",
        "[[1,0,0,0],[0,1,0,0]]",
        "--mode",
        "ho",
        "--window",
        "-3,3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(hochkit(&["check", "reduction", "--S", "truncated_poly:2", "--mode", "sideways"]).status.code(), Some(2));
}

#[test]
fn non_free_basis_rejected() {
    let o = hochkit(&[
        "check",
        "reduction",
        "--S",
        "truncated_poly:4",
        "--R",
        "truncated_poly:2",
        "--map",
        "[[1,0,0,0],[0,0,1,0]]",
        "--basis",
        "[[1,0,0,0],[0,0,1,0]]",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn preset_commands() {
    let o = hochkit(&["preset", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("truncated_poly:N") && out.contains("paper-suite") && out.contains("S3"));
    let o = hochkit(&["preset", "suite"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["cases"].as_array().unwrap().len() >= 30);
}

#[test]
fn builtin_suite_all_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("suite.json");
    let o = hochkit(&["run", "paper-suite", "--no-timestamp", "--strict", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["summary"]["fail"], 0);
    assert_eq!(report["summary"]["skipped"], 0);
    assert_eq!(report["summary"]["error"], 0);
}
