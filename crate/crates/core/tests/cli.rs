use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use quantum_replicator::cli::{ClassifyReport, EssReport, TransformReport};
use quantum_replicator::scenarios::ScenarioInstance;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quantum-replicator"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok_stdout(args)).unwrap()
}

#[test]
fn transform_classical_state_returns_the_matrix() {
    let v = json(&["transform", "--game", "1,-1,-1,1", "--weights", "1,0,0,0"]);
    assert_eq!(v["omega"], serde_json::json!([[0.0, 1.0], [-1.0, 0.0]]));
    assert_eq!(v["chi"], serde_json::json!([[0.0, -1.0], [1.0, 0.0]]));
}

#[test]
fn transform_case_a_k_params() {
    let text = ok_stdout(&["transform", "--spec", &fixture("case_a.json")]);
    let r: TransformReport = serde_json::from_str(&text).unwrap();
    assert!((r.k1 - 0.2).abs() < 1e-12);
    assert!((r.k2 + 0.2).abs() < 1e-12);
}

#[test]
fn weights_not_summing_to_one_exit_2() {
    let out = run(&["transform", "--game", "1,-1,-1,1", "--weights", "0.3,0.3,0.2,0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("weights must sum to 1"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn renormalize_flag_accepts_raw_weights() {
    let v = json(&["transform", "--game", "1,-1,-1,1", "--weights", "3,4,1,2", "--renormalize"]);
    assert!((v["K1"].as_f64().unwrap() - 0.2).abs() < 1e-12);
}

#[test]
fn classify_case_c() {
    let text = ok_stdout(&["classify", "--spec", &fixture("case_c.json")]);
    let r: ClassifyReport = serde_json::from_str(&text).unwrap();
    let interior = r.equilibria.iter().find(|e| e.equilibrium.x.fract() != 0.0).unwrap();
    assert_eq!(interior.linearization.tag.as_str(), "saddle");
    assert!(!interior.equilibrium.inside_unit_square);

    let v = json(&["classify", "--spec", &fixture("case_c.json"), "--weights", "1,0,0,0"]);
    let interior = &v["equilibria"][4];
    assert_eq!(interior["kind"], "interior");
    assert_eq!(interior["linearization"]["tag"], "center-linearization");
    assert_eq!(interior["inside_unit_square"], true);
}

#[test]
fn classify_degenerate_interior_warns() {
    let v = json(&["classify", "--game", "1,2,3,4", "--weights", "0.2,0.3,0.2,0.3"]);
    assert_eq!(v["equilibria"].as_array().unwrap().len(), 4);
    assert_eq!(v["degenerate_reason"], "K1+K2 = 0");
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn ess_reports_flips() {
    let text = ok_stdout(&["ess", "--spec", &fixture("case_a.json")]);
    let r: EssReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.comparison.flip.as_str(), "gained-ess");

    let v = json(&["ess", "--spec", &fixture("case_b.json")]);
    assert_eq!(v["flip"], "lost-ess");
}

#[test]
fn full_bimatrix_is_reduced_with_a_warning() {
    let v = json(&["ess", "--spec", &fixture("bimatrix.json")]);
    assert_eq!(v["game"], serde_json::json!({"a": 1.0, "b": -1.0, "c": -1.0, "d": 1.0}));
    assert_eq!(v["flip"], "gained-ess");
    assert!(v["warnings"][0].as_str().unwrap().contains("reduced"));
}

#[test]
fn mixed_game_forms_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"game": {"a": 1, "b": 2, "c": 3, "d": 4, "a11": 0}}"#).unwrap();
    let out = run(&["classify", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_case_a_reaches_the_corner() {
    let csv = ok_stdout(&["simulate", "--spec", &fixture("case_a.json")]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x,y"));
    let last: Vec<f64> = csv
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((last[1] - 1.0).abs() < 1e-4 && last[2].abs() < 1e-4, "{last:?}");
}

#[test]
fn simulate_writes_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let out = run(&[
        "simulate",
        "--spec",
        &fixture("case_a.json"),
        "--start",
        "0.5,0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t,x,y\n0.0,0.5,0.5\n"));
}

#[test]
fn portrait_has_id_column() {
    let csv = ok_stdout(&["portrait", "--spec", &fixture("case_a.json"), "--grid", "2", "--max-steps", "50"]);
    assert!(csv.starts_with("id,t,x,y\n"));
    let ids: std::collections::BTreeSet<&str> =
        csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids.into_iter().collect::<Vec<_>>(), vec!["0", "1", "2", "3"]);
}

#[test]
fn scan_resolution_one() {
    let csv = ok_stdout(&["scan", "--game", "1,-1,-1,1", "--resolution", "1"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("w11,w12,w21,w22,flip"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() <= 4);
    assert!(rows.iter().all(|r| !r.starts_with("1.0,0.0,0.0,0.0,")));
}

#[test]
fn scan_is_byte_stable() {
    let args = ["scan", "--spec", &fixture("case_a.json"), "--resolution", "20"];
    let first = ok_stdout(&args);
    assert!(first.contains("\n0.3,0.4,0.1,0.2,gained-ess\n"));
    assert_eq!(first, ok_stdout(&args));
}

#[test]
fn demo_cases_round_trip() {
    for (case, flip) in [("a", Some("gained-ess")), ("b", Some("lost-ess")), ("c", None)] {
        let text = ok_stdout(&["demo", case]);
        let inst: ScenarioInstance = serde_json::from_str(&text).unwrap();
        assert!(inst.verification.iter().all(|c| c.holds));
        if let Some(f) = flip {
            assert_eq!(inst.comparison.unwrap().flip.as_str(), f);
        }
        assert_eq!(text, ok_stdout(&["demo", case]));
    }
    let out = run(&["demo", "z"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_failures_exit_3() {
    let out = run(&["classify", "--spec", "/nonexistent/spec.json"]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&["demo", "a", "--out", "/nonexistent/dir/out.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_flags_are_validation_errors() {
    assert_eq!(run(&["simulate", "--game", "1,1,1,1", "--start", "0.5,0.5", "--step", "0"]).status.code(), Some(2));
    assert_eq!(run(&["portrait", "--game", "1,1,1,1", "--grid", "1"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--game", "1,1,1,1", "--resolution", "0"]).status.code(), Some(2));
    assert_eq!(run(&["ess", "--game", "1,1,1"]).status.code(), Some(2));
    assert_eq!(run(&["ess", "--game", "1,1,1,1", "--tol", "-1"]).status.code(), Some(2));
}
