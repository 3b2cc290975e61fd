use std::path::Path;
use std::process::{Command, Output};

fn fm_alba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fm-alba")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_frame(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn classify_prints_witness() {
    let o = fm_alba(&["classify", "(p -> q) -> q"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("p < q"), "{}", stdout(&o));
}

#[test]
fn classify_rejects_non_inductive() {
    let o = fm_alba(&["classify", "((p -> q) -> p) -> p"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not inductive");
}

#[test]
fn check_reflexive_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_frame(dir.path(), "one_refl.json", r#"{"worlds":["a"],"R":[["a","a"]]}"#);
    let o = fm_alba(&["check", "--frame", &path, "[]p -> p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid");
}

#[test]
fn check_irreflexive_point_refutes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_frame(dir.path(), "one.json", r#"{"worlds":["a"]}"#);
    let o = fm_alba(&["--json", "check", "--frame", &path, "[]p -> p"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["counterexample"]["props"]["p"], serde_json::json!([]));
}

#[test]
fn usage_and_file_errors_exit_2() {
    assert_eq!(fm_alba(&["check", "--frame", "/nonexistent/frame.json", "p"]).status.code(), Some(2));
    assert_eq!(fm_alba(&["parse", "p &"]).status.code(), Some(2));
    assert_eq!(fm_alba(&["nonsense"]).status.code(), Some(2));
    assert_eq!(fm_alba(&["frames", "--size", "9"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write_frame(dir.path(), "bad.json", r#"{"worlds":["a","b"],"leq2":[["a","b"]]}"#);
    assert_eq!(fm_alba(&["check", "--frame", &bad, "p"]).status.code(), Some(2));
}

#[test]
fn alba_output_and_trace() {
    let o = fm_alba(&["alba", "[]p -> p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "∅ => @i0 <= <*>@i0");
    let o = fm_alba(&["--json", "alba", "--trace", "[]p -> p"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["systems"].as_array().unwrap().len(), 1);
    assert_eq!(v["trace"]["steps"].as_array().unwrap().len(), 3);
}

#[test]
fn translate_is_byte_stable() {
    let a = fm_alba(&["translate", "[]p -> [][]p"]);
    let b = fm_alba(&["translate", "[]p -> [][]p"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("forall i0. forall i1."));
}

#[test]
fn parse_echoes_ast() {
    let o = fm_alba(&["--json", "parse", "[]p -> p"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["formula"], "[]p -> p");
    assert_eq!(v["ast"]["op"], "implies");
    assert_eq!(v["ast"]["args"][0]["op"], "box");
}

#[test]
fn frames_count_and_listing() {
    let o = fm_alba(&["frames", "--size", "1", "--count"]);
    assert_eq!(stdout(&o).trim(), "2");
    let o = fm_alba(&["--json", "frames", "--size", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 58);
    let labelled = stdout(&fm_alba(&["frames", "--size", "2", "--count"]));
    let canonical = stdout(&fm_alba(&["--canonical", "frames", "--size", "2", "--count"]));
    assert!(canonical.trim().parse::<usize>().unwrap() < labelled.trim().parse::<usize>().unwrap());
}

#[test]
fn verify_reports_pass() {
    let o = fm_alba(&["--json", "verify", "[]p -> p", "--max-size", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mismatches"], serde_json::json!([]));
    assert_eq!(v["frames_by_size"], serde_json::json!([2, 58]));
}

#[test]
fn verify_budget_exhaustion_fails() {
    let o = fm_alba(&["--budget", "1", "verify", "[]p -> p", "--max-size", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn selftest_small() {
    let o = fm_alba(&["selftest", "--max-size", "2", "--corpus", "5", "--samples", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
