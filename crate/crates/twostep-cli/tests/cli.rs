//! End-to-end runs of the `twostep` binary: exit codes, output formats and
//! the thread-count contract.

use std::process::{Command, Output};

use serde_json::Value;

fn twostep(args: &[&str]) -> Output {
    twostep_env(args, None)
}

fn twostep_env(args: &[&str], threads_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_twostep"));
    cmd.args(args).env_remove("TWOSTEP_THREADS");
    if let Some(v) = threads_env {
        cmd.env("TWOSTEP_THREADS", v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = twostep(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["schema"], 1);
    v
}

fn seq(v: &Value) -> Vec<u64> {
    v.as_array().expect("array").iter().map(|x| x.as_u64().expect("integer")).collect()
}

#[test]
fn delta_values_and_arity() {
    assert_eq!(json(&["delta", "-n", "4", "-r", "1", "-k", "2", "2", "15"])["delta"], "-7");
    assert_eq!(json(&["delta", "-n", "3", "-r", "1", "-k", "6", "11", "31"])["delta"], "1");
    let crit = json(&["delta", "-n", "2", "-r", "4", "-k", "29", "--critical"]);
    assert_eq!(crit["value"], "13/9");
    assert_eq!(code(&twostep(&["delta", "-n", "2", "-r", "2", "-k", "3", "1", "2", "3"])), 2);
}

#[test]
fn areas() {
    assert!(json(&["area", "-n", "2", "-k", "3"])["pairs"].as_array().unwrap().is_empty());
    assert!(json(&["area", "-n", "3", "-k", "2"])["pairs"].as_array().unwrap().is_empty());
    let pairs: Vec<Vec<u64>> = json(&["area", "-n", "4", "-k", "2"])["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(seq)
        .collect();
    assert!(pairs.contains(&vec![2, 15]));
}

#[test]
fn search_finds_published_sequences() {
    let rep = json(&["search", "-n", "2", "-r", "5", "-k", "9", "--strategy", "hypercube"]);
    let certs = rep["certificates"].as_array().unwrap();
    assert!(certs.iter().any(|c| seq(&c["colengths"]) == [51, 64, 76, 87, 102]));
    let rep = json(&["search", "-n", "3", "-r", "2", "-k", "2", "--strategy", "exhaustive"]);
    assert!(rep["certificates"].as_array().unwrap().iter().any(|c| seq(&c["colengths"]) == [14, 24]));
}

#[test]
fn empty_search_is_success() {
    let rep = json(&["search", "-n", "2", "-r", "2", "-k", "3", "--strategy", "exhaustive"]);
    assert!(rep["certificates"].as_array().unwrap().is_empty());
}

#[test]
fn csv_is_rfc4180() {
    let out = twostep(&["--format", "csv", "search", "-n", "3", "-r", "2", "-k", "2", "--strategy", "exhaustive"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,r,k,point,delta,dim_bound,colengths\r\n"));
    assert!(text.contains(",\"(14,24)\"\r\n"));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for rec in reader.records() {
        assert_eq!(rec.unwrap().len(), 7);
    }
}

#[test]
fn certify_fixtures() {
    let rep = json(&["certify", "--fixture", "nested-a4"]);
    assert_eq!(rep["tangent"]["tnt"], true);
    let rep = json(&["certify", "--fixture", "iarrobino78"]);
    assert_eq!(rep["tangent"]["tnt"], false);
    assert_eq!(rep["tangent"]["dims"]["1"], 55);
    let rep = json(&["certify", "--profile", "n=6,k=2,(1,6,20,7)", "--seed", "7"]);
    assert_eq!(rep["tangent"]["tnt"], true);
}

#[test]
fn sampler_exhaustion_exits_3() {
    let out = twostep(&["sample", "--profile", "n=3,k=2,(1,3,3,2)"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&twostep(&["repro", "no-such-target"])), 2);
    assert_eq!(code(&twostep(&["certify"])), 2);
    assert_eq!(code(&twostep(&["certify", "--profile", "n=2,(1,2,9)"])), 2);
}

#[test]
fn repro_matches_reference() {
    let rep = json(&["repro", "fourfold-small"]);
    assert_eq!(rep["passed"], true);
    assert_eq!(rep["compared_cells"], 21);
    let out = twostep(&["repro", "length78"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("stratum 232; smoothable 234; Δ = 1"));
}

#[test]
fn json_is_identical_across_thread_counts() {
    let args = |t: &'static str| ["--format", "json", "--threads", t, "search", "-n", "2", "-r", "5", "-k", "9"];
    let one = twostep(&args("1"));
    let four = twostep(&args("4"));
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let s1 = twostep(&["--format", "json", "--threads", "1", "sample", "--profile", "n=4,k=2,(1,4,8,5)", "--count", "3"]);
    let s4 = twostep(&["--format", "json", "--threads", "4", "sample", "--profile", "n=4,k=2,(1,4,8,5)", "--count", "3"]);
    assert_eq!(s1.stdout, s4.stdout);
}

#[test]
fn threads_flag_overrides_environment() {
    let args = ["--threads", "2", "delta", "-n", "4", "-r", "1", "-k", "2", "2", "15"];
    assert_eq!(code(&twostep_env(&args, Some("not-a-number"))), 0);
    assert_eq!(code(&twostep_env(&args[2..], Some("not-a-number"))), 2);
    assert_eq!(code(&twostep_env(&args[2..], Some("3"))), 0);
    assert_eq!(code(&twostep(&["--threads", "0", "delta", "-n", "4", "-r", "1", "-k", "2", "2", "15"])), 2);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("twostep-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = twostep(&["--format", "json", "-o", p, "theta", "-n", "4", "-k", "2", "2", "15"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["theta"], "-5");
    assert_eq!(v["schema"], 1);
}
