use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dessin(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dessin"))
        .args(args)
        .env("DESSIN_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn strip_elapsed(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_elapsed);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_elapsed),
        _ => {}
    }
}

#[test]
fn weighted_genus_zero_correlator() {
    let dir = tempfile::tempdir().unwrap();
    let out = dessin(dir.path(), &["--format", "text", "correlator", "--genus", "0", "--parts", "4", "--weighted"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "s^4*u*v^4 + 6*s^4*u^2*v^3 + 6*s^4*u^3*v^2 + s^4*u^4*v");
    let out = dessin(dir.path(), &["correlator", "--genus", "0", "--parts", "4", "--weighted"]);
    assert_eq!(stdout_json(&out)["text"], "s^4*u*v^4 + 6*s^4*u^2*v^3 + 6*s^4*u^3*v^2 + s^4*u^4*v");
}

#[test]
fn main_theorem_one_one_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dessin(dir.path(), &["verify", "--suite", "main-theorem", "--g", "1", "--n", "1", "--order", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "pass");
    assert!(v["checked_count"].as_u64().unwrap() > 0);
}

#[test]
fn type_b_generating_function() {
    let dir = tempfile::tempdir().unwrap();
    let out = dessin(dir.path(), &["identity", "--name", "typeB-gf", "--order", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["status"], "pass");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| dessin(dir.path(), args).status.code();
    assert_eq!(code(&["verify", "--suite", "eo-base"]), Some(0));
    assert_eq!(code(&["verify", "--suite", "no-such-suite"]), Some(2));
    assert_eq!(code(&["eo", "--genus", "0", "--n", "2"]), Some(2));
    assert_eq!(code(&["identity", "--name", "bogus"]), Some(2));
    assert_eq!(code(&["times", "--branch", "sideways", "--order", "3"]), Some(2));
    assert_eq!(code(&["correlator", "--genus", "0"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    let bad = dessin(dir.path(), &["verify", "--suite", "no-such-suite"]);
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("main-theorem"));
}

#[test]
fn skipped_suites_do_not_fail() {
    let dir = tempfile::tempdir().unwrap();
    let out = dessin(dir.path(), &["verify", "--suite", "t-numbers", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["summary"]["skipped"].as_u64().unwrap() > 0);
}

#[test]
fn seedless_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--suite", "narayana-law", "--seedless"];
    let first = dessin(dir.path(), &args);
    let second = dessin(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn warm_cache_matches_cold() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--suite", "main-theorem", "--g", "0", "--n", "4", "--order", "8"];
    let mut cold = stdout_json(&dessin(dir.path(), &args));
    assert!(dir.path().join("correlators.json").exists());
    let mut warm = stdout_json(&dessin(dir.path(), &args));
    strip_elapsed(&mut cold);
    strip_elapsed(&mut warm);
    assert_eq!(cold, warm);
}

#[test]
fn cache_flag_overrides_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let flag = flag_dir.path().to_str().unwrap();
    let out = dessin(env_dir.path(), &["--cache", flag, "cache", "warm", "--genus", "1", "--max-sum", "4"]);
    assert!(out.status.success());
    assert!(flag_dir.path().join("correlators.json").exists());
    assert!(!env_dir.path().join("correlators.json").exists());
    let stats = stdout_json(&dessin(env_dir.path(), &["--cache", flag, "cache", "stats"]));
    assert!(stats["entries"].as_u64().unwrap() > 0);
    let cleared = stdout_json(&dessin(env_dir.path(), &["--cache", flag, "cache", "clear"]));
    assert_eq!(cleared["removed"], true);
    assert!(!flag_dir.path().join("correlators.json").exists());
}

#[test]
fn eo_and_npoint_emit_json() {
    let dir = tempfile::tempdir().unwrap();
    let eo = stdout_json(&dessin(dir.path(), &["eo", "--genus", "1", "--n", "1"]));
    assert_eq!(eo["g"], 1);
    let np = dessin(dir.path(), &["npoint", "--genus", "0", "--n", "1", "--order", "4"]);
    assert!(np.status.success());
    stdout_json(&np);
    let lists = stdout_json(&dessin(dir.path(), &["identity", "--list"]));
    assert!(lists["identities"].as_array().unwrap().iter().any(|n| n == "bergman-pp"));
}
