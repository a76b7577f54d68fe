use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crossloop"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_then_fixtures_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["gen", "--n", "2"]).status.code(), Some(0));
    let o = run(dir.path(), &["fixtures", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS fixture-psi2"));
}

#[test]
fn tampered_entry_is_a_verification_failure() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "--n", "2"]);
    let path = dir.path().join("psi-2.json");
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let entries = doc["entries"].as_object_mut().unwrap();
    let key = entries.keys().next().unwrap().clone();
    entries.insert(key, serde_json::json!("z1"));
    fs::write(&path, doc.to_string()).unwrap();
    let o = run(dir.path(), &["fixtures", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL fixture-psi2"));
}

#[test]
fn gen_output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(a.path(), &["gen", "--n", "3"]);
    run(b.path(), &["gen", "--n", "3"]);
    let read = |d: &Path| fs::read(d.join("psi-3.json")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn numbers_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["numbers", "--n-max", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,determinant,pfaffian,lgv,match");
    assert_eq!(lines[2], "2,7,7,7,true");
    assert_eq!(lines[4], "4,82977,82977,82977,true");
    assert!(lines[5].starts_with("5,"));
    assert_eq!(lines.len(), 6);
}

#[test]
fn numbers_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["numbers", "--n-max", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().is_some_and(|rows| rows.len() == 3));
}

#[test]
fn check_small_size_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["check", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("check-2.json")).unwrap()).unwrap();
    assert!(doc.get("sums").is_some());
}

#[test]
fn gated_size_is_skipped_by_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["check", "--n", "4", "--suite", "sums"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("SKIP sums n=4"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["gen", "--n", "0"][..],
        &["check", "--n", "2", "--suite", "nope"],
        &["numbers"],
        &["gen", "--n", "4"],
    ] {
        assert_eq!(run(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn degrees_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["degrees", "--n", "2"]).status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("degrees-2.json")).unwrap()).unwrap();
    assert_eq!(doc["patterns"].as_object().map(|m| m.len()), Some(2));
}
