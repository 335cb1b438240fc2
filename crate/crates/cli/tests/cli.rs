use std::path::Path;
use std::process::{Command, Output};

use k1lab::congruence::Verdict;
use k1lab_cli::check::Row;

fn k1lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k1lab")).args(args).output().expect("binary runs")
}

fn write_manifest(dir: &Path, text: &str) -> String {
    let path = dir.join("manifest.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const HEIS: &str = r#""groups": {"H": {"kind": "catalog", "name": "heisenberg", "p": 3}}"#;

#[test]
fn catalog_lists_heisenberg() {
    let out = k1lab(&["catalog"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().lines().any(|l| l.starts_with("Heis3\t3\t27")));
}

#[test]
fn catalog_filter_by_order_27_has_two_nonabelian_entries() {
    let out = k1lab(&["catalog", "--order", "27", "--json"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let nonabelian: Vec<_> = rows.as_array().unwrap().iter().filter(|r| r["abelian"] == false).collect();
    assert_eq!(nonabelian.len(), 2);
    let mut exps: Vec<u64> = nonabelian.iter().map(|r| r["exponent"].as_u64().unwrap()).collect();
    exps.sort();
    assert_eq!(exps, vec![3, 9]);
}

#[test]
fn unknown_catalog_filter_is_a_usage_error() {
    let out = k1lab(&["catalog", "--colour", "red"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn brauer_of_a_linear_character_is_a_single_term() {
    let out = k1lab(&["brauer", "--group", "Heis3", "--character", "1"]);
    assert!(out.status.success());
    let js: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(js["degree"], 1);
    assert_eq!(js["element"]["terms"].as_array().unwrap().len(), 1);
    assert_eq!(js["element"]["terms"][0]["coefficient"], 1);
    assert_eq!(js["verify_section"], true);
}

#[test]
fn brauer_of_a_degree_three_character_has_several_terms() {
    let out = k1lab(&["brauer", "--group", "Heis3", "--character", "10"]);
    let js: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(js["degree"], 3);
    assert!(js["element"]["terms"].as_array().unwrap().len() > 1);
    assert_eq!(js["verify_section"], true);
}

#[test]
fn brauer_index_out_of_range_fails() {
    let out = k1lab(&["brauer", "--group", "Heis3", "--character", "11"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

#[test]
fn wall_sweep_gives_one_holds_row_per_unit() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(
        dir.path(),
        &format!(r#"{{"format_version": 1, "seed": 1, {HEIS}, "tasks": [{{"check": "wall", "group": "H", "units": 100}}]}}"#),
    );
    let out_dir = dir.path().join("out");
    let out = k1lab(&["check", "--manifest", &m, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(out_dir.join("report.csv")).unwrap();
    let verdicts: Vec<String> = rdr.records().map(|r| r.unwrap()[7].to_string()).collect();
    assert_eq!(verdicts.len(), 100);
    assert!(verdicts.iter().all(|v| v == "holds"));
}

#[test]
fn empty_manifest_gives_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(dir.path(), r#"{"format_version": 1}"#);
    let out_dir = dir.path().join("out");
    let out = k1lab(&["check", "--manifest", &m, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    let js: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(js["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn undeclared_group_is_rejected_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(dir.path(), r#"{"format_version": 1, "tasks": [{"check": "rw1", "group": "nope"}]}"#);
    let out_dir = dir.path().join("out");
    let out = k1lab(&["check", "--manifest", &m, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("undeclared group"));
    assert!(!out_dir.exists());
}

#[test]
fn malformed_manifest_and_wrong_prime_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(dir.path(), r#"{"format_version": 1, "tasks": [{"check": "rw9", "group": "H"}]}"#);
    assert_eq!(k1lab(&["check", "--manifest", &m, "--out", "/nonexistent/x"]).status.code(), Some(2));
    let m = write_manifest(dir.path(), &format!(r#"{{"format_version": 1, {HEIS}, "tasks": []}}"#));
    let out = k1lab(&["check", "--manifest", &m, "--p", "5", "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

fn run_twice(manifest: &str, extra_a: &[&str], extra_b: &[&str]) -> (Vec<u8>, Vec<u8>, Vec<u8>, Vec<u8>) {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(dir.path(), manifest);
    let mut outs = Vec::new();
    for (name, extra) in [("a", extra_a), ("b", extra_b)] {
        let d = dir.path().join(name);
        let mut args = vec!["check", "--manifest", &m, "--out", d.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert_eq!(k1lab(&args).status.code(), Some(0));
        outs.push((std::fs::read(d.join("report.csv")).unwrap(), std::fs::read(d.join("report.json")).unwrap()));
    }
    let (a, b) = (outs.remove(0), outs.remove(0));
    (a.0, b.0, a.1, b.1)
}

const MIXED: &str = r#"{"format_version": 1, "seed": 7,
  "groups": {"H": {"kind": "catalog", "name": "heisenberg", "p": 3},
             "M": {"kind": "catalog", "name": "modular", "p": 3}},
  "tasks": [
    {"check": "membership", "group": "H", "units": 4, "k": 2},
    {"check": "rw3", "group": "M", "units": 6},
    {"check": "adversarial", "group": "M", "condition": "RW2", "units": 3},
    {"check": "snaith", "group": "H", "units": 5},
    {"check": "rw4", "group": "H", "units": 1, "tuple": "one"}
  ]}"#;

#[test]
fn identical_manifest_and_seed_give_byte_identical_reports() {
    let (csv_a, csv_b, js_a, js_b) = run_twice(MIXED, &["--jobs", "1"], &["--jobs", "4"]);
    assert_eq!(csv_a, csv_b);
    assert_eq!(js_a, js_b);
}

#[test]
fn the_seed_flag_changes_the_units() {
    let (_, _, js_a, js_b) = run_twice(MIXED, &["--seed", "1"], &["--seed", "2"]);
    assert_ne!(js_a, js_b);
}

#[test]
fn unexpected_rows_are_those_expected_to_hold() {
    let row = |verdict, expected| Row {
        task: 0,
        check: "rw1",
        group: "H".into(),
        p: 3,
        k: 2,
        unit: 0,
        instances: 1,
        verdict,
        expected,
        detail: String::new(),
    };
    assert!(row(Verdict::Fails, Verdict::Holds).is_unexpected());
    assert!(row(Verdict::Rejected, Verdict::Candidate).is_unexpected());
    assert!(!row(Verdict::Holds, Verdict::Holds).is_unexpected());
    assert!(!row(Verdict::Holds, Verdict::Rejected).is_unexpected());
}
