use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proctheory"))
        .args(args)
        .env_remove("PROCTHEORY_SEED")
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], seed: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proctheory"))
        .args(args)
        .env("PROCTHEORY_SEED", seed)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_timestamp(mut v: Value) -> Value {
    v["metadata"].as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn audit_all_checks_passes() {
    let out = run(&["audit", "--backend", "cpmC", "--dims", "2,3", "--checks", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("all checks passed"));
}

#[test]
fn laws_mat_q_passes() {
    let out = run(&["laws", "--backend", "matQ", "--dims", "4"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unknown_check_is_usage_error() {
    let out = run(&["audit", "--backend", "cpmC", "--checks", "no_such"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such"));
}

#[test]
fn unknown_backends_are_usage_errors() {
    assert_eq!(run(&["audit", "--backend", "quaternions"]).status.code(), Some(2));
    assert_eq!(run(&["laws", "--backend", "quaternions"]).status.code(), Some(2));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(run(&["audit", "--samples", "many"]).status.code(), Some(2));
    assert_eq!(run(&["audit", "--tol", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["closure", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one_and_still_writes_report() {
    let dir = std::env::temp_dir().join(format!("proctheory-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mutant.json");
    let out = run(&[
        "audit",
        "--backend",
        "cpmC",
        "--mutant",
        "non_central_phases",
        "--samples",
        "40",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["pass"], Value::Bool(false));
    let failed: Vec<&Value> = report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["pass"] == Value::Bool(false))
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["check"], "phased_ring_scalars");
    assert!(!failed[0]["witnesses"].as_array().unwrap().is_empty());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_is_deterministic_modulo_timestamp() {
    let args = ["audit", "--backend", "cpmR", "--samples", "30", "--format", "json"];
    let a = without_timestamp(json_of(&run(&args)));
    let b = without_timestamp(json_of(&run(&args)));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn env_seed_overrides_flag() {
    let args = ["audit", "--backend", "cpmC", "--samples", "20", "--seed", "1", "--format", "json"];
    let from_env = without_timestamp(json_of(&run_env(&args, "7")));
    assert_eq!(from_env["metadata"]["seed"], 7);
    let flag = ["audit", "--backend", "cpmC", "--samples", "20", "--seed", "7", "--format", "json"];
    let from_flag = without_timestamp(json_of(&run(&flag)));
    assert_eq!(from_env, from_flag);
    assert_eq!(run_env(&args, "seven").status.code(), Some(2));
}

#[test]
fn config_file_is_read() {
    let dir = std::env::temp_dir().join(format!("proctheory-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.json");
    std::fs::write(&path, r#"{"backend": "cpmR", "dims": [2], "samples": 10, "checks": ["homogeneity"]}"#).unwrap();
    let out = run(&["audit", "--config", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["metadata"]["backend"], "cpmR");
    assert_eq!(v["entries"].as_array().unwrap().len(), 1);
    std::fs::write(&path, r#"{"backend": "cpmR", "colour": "blue"}"#).unwrap();
    assert_eq!(run(&["audit", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn closure_totalise_and_gp_pass() {
    assert_eq!(run(&["closure", "--model", "spek", "--n", "1"]).status.code(), Some(0));
    assert_eq!(run(&["totalise"]).status.code(), Some(0));
    assert_eq!(run(&["gp-roundtrip", "--samples", "20"]).status.code(), Some(0));
}

#[test]
fn unsaturated_closure_fails() {
    let out = run(&["closure", "--n", "1", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_schema_is_json() {
    let out = run(&["report-schema"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["title"], "AuditReport");
}

#[test]
fn every_law_backend_passes() {
    for b in ["matB", "matN", "matQplus", "matQ", "matQi", "matR", "matC", "rel", "cpmQ", "cpmQi", "cpmR", "cpmC"] {
        let out = run(&["laws", "--backend", b, "--dims", "3", "--samples", "40"]);
        assert_eq!(out.status.code(), Some(0), "{b}: {}", String::from_utf8_lossy(&out.stdout));
    }
}
