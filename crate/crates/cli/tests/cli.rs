use std::path::Path;
use std::process::{Command, Output};

fn disjedge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_disjedge"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_validate_extract_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let out = disjedge(
        &["generate", "--family", "convex", "--n", "8", "--out", "d.json"],
        tmp.path(),
    );
    assert!(out.status.success(), "{out:?}");

    let out = disjedge(&["validate", "d.json"], tmp.path());
    assert!(out.status.success());
    let diag: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(diag["ok"], serde_json::Value::Bool(true));

    let out = disjedge(&["extract", "d.json"], tmp.path());
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verified_disjoint"], serde_json::Value::Bool(true));
    // Convex instances keep the whole matching: n/2 = 3 edges.
    assert_eq!(report["chosen"].as_array().unwrap().len(), 3);
    assert!(report.get("timings").is_none());
}

#[test]
fn extract_output_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        &["generate", "--family", "random", "--n", "9", "--seed", "5", "--out", "a.json"],
        &["generate", "--family", "random", "--n", "9", "--seed", "5", "--out", "b.json"],
    ] {
        assert!(disjedge(args, tmp.path()).status.success());
    }
    let a = std::fs::read(tmp.path().join("a.json")).unwrap();
    let b = std::fs::read(tmp.path().join("b.json")).unwrap();
    assert_eq!(a, b);

    let r1 = disjedge(&["extract", "a.json"], tmp.path());
    let r2 = disjedge(&["extract", "b.json"], tmp.path());
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn invalid_drawing_exits_one_with_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    // Four collinear vertices: the middle ones sit on foreign arc interiors.
    let bad = r#"{
        "format_version": 1,
        "vertices": [
            {"id": 0, "x": "0", "y": "0"},
            {"id": 1, "x": "1", "y": "0"},
            {"id": 2, "x": "2", "y": "0"},
            {"id": 3, "x": "3", "y": "0"}
        ]
    }"#;
    std::fs::write(tmp.path().join("bad.json"), bad).unwrap();
    let out = disjedge(&["validate", "bad.json"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let diag: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(diag["ok"], serde_json::Value::Bool(false));
    assert!(!diag["violations"].as_array().unwrap().is_empty());

    let out = disjedge(&["extract", "bad.json"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("garbage.json"), "not json").unwrap();
    let out = disjedge(&["validate", "garbage.json"], tmp.path());
    assert_eq!(out.status.code(), Some(2));

    let out = disjedge(&["validate", "missing.json"], tmp.path());
    assert_eq!(out.status.code(), Some(2));

    let out = disjedge(&["generate", "--family", "convex"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_agrees_with_pipeline_on_convex_eight() {
    let tmp = tempfile::tempdir().unwrap();
    disjedge(
        &["generate", "--family", "convex", "--n", "8", "--out", "d.json"],
        tmp.path(),
    );
    let out = disjedge(&["oracle", "d.json"], tmp.path());
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["size"], serde_json::json!(4));
    assert_eq!(doc["witness"].as_array().unwrap().len(), 4);
}

#[test]
fn shatter_emits_csv_within_bounds() {
    let tmp = tempfile::tempdir().unwrap();
    disjedge(
        &["generate", "--family", "random", "--n", "11", "--seed", "2", "--out", "d.json"],
        tmp.path(),
    );
    let out = disjedge(
        &["shatter", "d.json", "--m", "1,2,4", "--trials", "60"],
        tmp.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let csv = stdout(&out);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("family,m,observed_max,bound"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 4, "{line}");
        let observed: u64 = cols[2].parse().unwrap();
        let bound: u64 = cols[3].parse().unwrap();
        assert!(observed <= bound, "{line}");
    }
}
