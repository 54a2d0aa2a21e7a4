//! End-to-end runs of the `zigzag` binary: exit codes and report contents.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zigzag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn block(v: &Value, source: u64, target: u64) -> Vec<Value> {
    v["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|b| b["source"] == source && b["target"] == target)
        .flat_map(|b| b["elements"].as_array().unwrap().iter().cloned())
        .collect()
}

#[test]
fn build_reports() {
    let out = run(&["build", "zigzag", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dimension"], 10);
    assert_eq!(v["schema_version"], 1);

    let v = json(&run(&["build", "an_shriek", "--n", "2"]));
    assert_eq!(block(&v, 1, 1), vec![serde_json::json!([1])]);

    let v = json(&run(&["build", "s", "--n", "3"]));
    let b11 = block(&v, 1, 1);
    for e in ["1_1", "h_1", "→α_1", "←α_1"] {
        assert!(b11.contains(&Value::from(e)), "{b11:?}");
    }
    assert_eq!(v["dimension"], 12);
}

#[test]
fn verify_reports() {
    let out = run(&["verify", "--suite", "transfer", "--n", "4", "--max-arity", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["reports"][0]["details"]["m3"].as_array().unwrap().len(), 6);

    let v = json(&run(&["verify", "--suite", "hochschild", "--n", "4", "--samples", "5"]));
    assert_eq!(v["reports"][0]["details"]["not_coboundary"], true);

    let out = run(&["verify", "--n", "2..5", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "pass");
}

#[test]
fn transfer_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = run(&[
        "transfer",
        "--n",
        "3",
        "--max-arity",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let layers = v["layers"].as_array().unwrap();
    assert_eq!(layers[1]["arity"], 3);
    assert_eq!(layers[1]["nonzero"], 3);
    assert_eq!(layers[2]["nonzero"], 0);

    let v = json(&run(&["transfer", "--n", "4", "--max-arity", "6"]));
    for l in &v["layers"].as_array().unwrap()[2..] {
        assert_eq!(l["nonzero"], 0);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["transfer", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["build", "zigzag", "--n", "9"]).status.code(), Some(2));
    assert_eq!(
        run(&["build", "zigzag", "--n", "9", "--ceiling", "9"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["transfer", "--n", "3", "--max-arity", "9"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--suite", "nope", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "5..2"]).status.code(), Some(2));
    let out = run(&["verify", "--suite", "burau", "--n", "3", "--perturb"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["status"], "fail");
    assert!(v["reports"][0]["perturbation"].is_string());
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "verify",
        "--suite",
        "hochschild,bimodule",
        "--n",
        "3",
        "--seed",
        "7",
        "--samples",
        "5",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
