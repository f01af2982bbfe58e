use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_epsilon-forge"));
    c.env_remove("EPSILON_FORGE_BUDGET");
    c
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn input(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn run_emits_one_line_per_step() {
    let out = run(&["run", "--input", &input("two_axiom.crit")]);
    assert_eq!(code(&out), 0);
    let lines: Vec<Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["an"], serde_json::json!(["w"]));
    assert_eq!(lines[2]["solving"], true);
}

#[test]
fn empty_set_is_one_solving_step() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.crit");
    std::fs::write(&path, "").unwrap();
    let out = run(&["run", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains(r#""solving":true"#));
}

#[test]
fn bound_matches_run() {
    for name in [
        "single.crit",
        "two_axiom.crit",
        "chain.crit",
        "reset_cascade.crit",
    ] {
        let ran = run(&["run", "--input", &input(name)]);
        let steps = stdout(&ran).lines().count();
        let out = run(&["bound", "--input", &input(name)]);
        assert_eq!(code(&out), 0, "{name}");
        let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(doc["h"], steps - 1, "{name}");
        assert_eq!(doc["auditSummary"]["violations"], 0);
    }
}

#[test]
fn analyze_reads_a_saved_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let cr = input("rank3_cascade.crit");
    let out = run(&[
        "run",
        "--input",
        &cr,
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let direct = run(&["analyze", "--input", &cr]);
    let saved = run(&[
        "analyze",
        "--input",
        &cr,
        "--trace-in",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&saved), 0);
    assert_eq!(stdout(&direct), stdout(&saved));
    let doc: Value = serde_json::from_str(&stdout(&saved)).unwrap();
    assert_eq!(doc["certificate"]["decreasing"], true);
    assert_eq!(doc["h"], 29);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.crit");
    std::fs::write(&bad, "(crit x (< y x) 1)").unwrap();
    assert_eq!(code(&run(&["run", "--input", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["bound", "--input", "/nonexistent.crit"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn budget_from_environment_exits_3() {
    let out = bin()
        .args(["run", "--input", &input("reset_cascade.crit")])
        .env("EPSILON_FORGE_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let flag = run(&[
        "bound",
        "--input",
        &input("reset_cascade.crit"),
        "--budget",
        "3",
    ]);
    assert_eq!(code(&flag), 3);
}

#[test]
fn gen_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let out = run(&[
            "gen",
            "--seed",
            "4",
            "--count",
            "5",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    for i in 0..5 {
        let name = format!("inst-{i:03}.crit");
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        assert_eq!(x, y);
        assert!(!x.is_empty());
    }
}

#[test]
fn verify_passes_on_data_and_generated_corpus() {
    let out = run(&["verify", "--input", data("").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("instances pass"));
    let out = run(&["verify", "--seed", "2", "--count", "10", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc.is_object());
}
