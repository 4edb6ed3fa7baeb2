use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sperner-cake"));
    cmd.env_remove("RUST_LOG");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn uniform(kind: &str) -> String {
    format!(r#"{{"type": "{kind}", "density": [{{"start": "0", "end": "1", "value": "1"}}]}}"#)
}

fn problem(dir: &Path, kinds: &[&str]) -> String {
    let players: Vec<String> = kinds.iter().map(|k| uniform(k)).collect();
    let text = format!(r#"{{"n": {}, "players": [{}]}}"#, kinds.len(), players.join(", "));
    let path = dir.join(format!("{}.json", kinds.join("-")));
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_rejection_pair() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem(dir.path(), &["rejection", "rejection"]);
    let out = run(&["solve", "--input", &input, "--max-depth", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "exact");
    assert_eq!(v["cuts"][1], "1/2");
    assert_eq!(v["assignment"]["1"], 2);
    assert_eq!(v["assignment"]["2"], 1);
    assert_eq!(v["envy_gap"], "0");
    assert_eq!(v["trace"][0]["mesh"], "1/2");
}

#[test]
fn solve_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem(dir.path(), &["attraction", "rejection", "attraction"]);
    let a = run(&["solve", "--input", &input, "--max-depth", "3"]);
    let b = run(&["solve", "--input", &input, "--max-depth", "3", "--jobs", "1"]);
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
    let file = dir.path().join("out.json");
    let c = run(&["solve", "--input", &input, "--max-depth", "3", "--output", file.to_str().unwrap()]);
    assert_eq!(c.status.code(), a.status.code());
    assert_eq!(fs::read(&file).unwrap(), a.stdout);
}

#[test]
fn budget_exhaustion_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem(dir.path(), &["attraction", "attraction", "attraction"]);
    let out = run(&["solve", "--input", &input, "--max-depth", "2", "--min-depth", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "budget-exhausted");
    let out = run(&["solve", "--input", &input, "--budget", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn env_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem(dir.path(), &["attraction", "attraction", "attraction"]);
    let out = bin()
        .args(["solve", "--input", &input])
        .env("SPERNER_CAKE_MIN_DEPTH", "3")
        .env("SPERNER_CAKE_MAX_DEPTH", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["trace"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_input_exits_1_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"n\": 2,\n\"players\": [\n}").unwrap();
    let out = run(&["solve", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    fs::write(&path, r#"{"n": 1, "players": [{"type": "attraction", "density": [{"start": "0", "end": "1", "value": "-1"}]}]}"#)
        .unwrap();
    let out = run(&["check-input", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("players[0].density"));

    let missing = run(&["solve", "--input", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn check_input_reports_each_player() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem(dir.path(), &["attraction", "rejection", "rejection"]);
    let out = run(&["check-input", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["players"].as_array().unwrap().len(), 3);
    assert!(v["players"].as_array().unwrap().iter().all(|p| p["full_division"] == "ok"));
}

#[test]
fn unguaranteed_n_warns_and_uses_matching() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem(dir.path(), &["attraction", "rejection", "attraction", "rejection", "attraction", "attraction"]);
    let repro = dir.path().join("repro.json");
    let out = run(&["solve", "--input", &input, "--max-depth", "1", "--repro", repro.to_str().unwrap()]);
    assert!(matches!(out.status.code(), Some(0) | Some(2) | Some(4)));
    assert!(String::from_utf8_lossy(&out.stderr).contains("neither prime nor 4"));
    if out.status.code() != Some(4) {
        assert_eq!(json(&out)["guaranteed"], false);
    }
}

#[test]
fn subdivide_stats() {
    let out = run(&["subdivide", "--n", "3", "--depth", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["vertices"], 7);
    assert_eq!(v["simplices"], 6);
    assert_eq!(v["mesh"], "2/3");
    assert_eq!(v["nice"], true);
    assert_eq!(v["owner_valid"], true);

    let v = json(&run(&["subdivide", "--n", "4", "--depth", "2"]));
    assert_eq!(v["simplices"], 576);
    assert_eq!(v["supports_comparable"], true);

    let v = json(&run(&["subdivide", "--n", "5", "--depth", "0"]));
    assert_eq!(v["owner_valid"], Value::Null);

    assert_eq!(run(&["subdivide", "--n", "6", "--depth", "3"]).status.code(), Some(2));
}

#[test]
fn verify_lemma_suites() {
    let out = run(&["verify-lemma", "--n", "3", "--depth", "2", "--trials", "50", "--identity-trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["det_sum"]["failures"].as_array().unwrap().len(), 0);

    let v = json(&run(&["verify-lemma", "--n", "2", "--depth", "1", "--trials", "1"]));
    let identity = v["det_sum"]["identity_labeling"].as_str().unwrap();
    assert!(identity == "1" || identity == "-1");

    let out = run(&["verify-lemma", "--n", "3", "--depth", "1", "--corrupt"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("affine hull"));
}

#[test]
fn verify_theorem_suites() {
    let out = run(&["verify-theorem", "--n", "3", "--depth", "3", "--trials", "100", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);

    let out = run(&["verify-theorem", "--n", "4", "--depth", "2", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["mode"], "prop4");

    let out = run(&["verify-theorem", "--n", "6", "--depth", "1", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mode"], "scan");
    assert!(v.get("passed").is_none());
    assert_eq!(v["trials"].as_array().unwrap().len(), 3);

    let a = run(&["verify-theorem", "--n", "5", "--depth", "1", "--trials", "4", "--seed", "11"]);
    let b = run(&["verify-theorem", "--n", "5", "--depth", "1", "--trials", "4", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn replay_reads_dumped_instances() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("instance.json");
    let instance = r#"{"n": 3, "depth": 0,
        "vertices": [["1","0","0"], ["0","1","0"], ["0","0","1"]],
        "simplices": [[0, 1, 2]],
        "labels": [[1], [1], [1]]}"#;
    fs::write(&path, instance).unwrap();
    let out = run(&["replay", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["det_witnesses"], 0);

    fs::write(&path, instance.replace(r#"[[1], [1], [1]]"#, r#"[[1], [2], [3]]"#)).unwrap();
    let out = run(&["replay", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["first"]["picks"], serde_json::json!([1, 2, 3]));
}
