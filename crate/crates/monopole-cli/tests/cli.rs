//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_monopole");

const POINT: &str =
    r#"{"cartan":"A2","alpha":{"1":1,"2":1},"x":{"1":["0"],"2":["2"]},"y":{"1":["1"],"2":["3"]}}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn bracket_running_example() {
    let dir = tempfile::tempdir().unwrap();
    let point = dir.path().join("point.json");
    fs::write(&point, POINT).unwrap();
    let out = run(&["bracket", "--point", point.to_str().unwrap(), "--a", "y:1:1", "--b", "y:2:1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3/2");
}

#[test]
fn rank_running_example() {
    let dir = tempfile::tempdir().unwrap();
    let point = dir.path().join("point.json");
    fs::write(&point, POINT).unwrap();
    let out = run(&["rank", "--point", point.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = ["verify", "--cartan", "A2", "--alpha", "1,1", "--seed", "7", "--points", "25"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");
    let report: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["jacobi"]["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report["inverse"]["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report["oracle"]["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn seed_env_fallback() {
    let flagged = run(&["verify", "--cartan", "A1", "--alpha", "2", "--seed", "13", "--points", "10"]);
    let from_env = Command::new(BIN)
        .args(["verify", "--cartan", "A1", "--alpha", "2", "--points", "10"])
        .env("MONOPOLE_SEED", "13")
        .output()
        .unwrap();
    assert!(flagged.status.success() && from_env.status.success());
    assert_eq!(flagged.stdout, from_env.stdout);
}

#[test]
fn malformed_alpha_exits_2() {
    let out = run(&["verify", "--cartan", "A2", "--alpha", "1,x", "--points", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_cartan_exits_2() {
    let out = run(&["verify", "--cartan", "Q7", "--alpha", "1", "--points", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown type name"));
}

#[test]
fn leaves_pinned_example() {
    let out = run(&["leaves", "--cartan", "A2", "--J", "2", "--beta", "2,0", "--convention", "lemma"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["lifts"], serde_json::json!([[2, 0], [2, 1]]));
    assert_eq!(json["dimensions"], serde_json::json!([4, 6]));

    let out = run(&["leaves", "--cartan", "A2", "--J", "2", "--beta", "2,0", "--convention", "literal"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["lifts"], serde_json::json!([[2, 0]]));

    // defaulting emits the convention note on stderr
    let out = run(&["leaves", "--cartan", "A2", "--J", "2", "--beta", "2,0"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("lemma"));
}

#[test]
fn chart_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("point.json"), POINT).unwrap();
    let out = run_in(dir.path(), &["chart", "to-polys", "point.json", "--out", "pc.json"]);
    assert!(out.status.success());
    let pc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("pc.json")).unwrap()).unwrap();
    assert_eq!(pc["p"]["2"], serde_json::json!(["-2", "1"]));
    assert_eq!(pc["roots"]["2"], serde_json::json!(["2"]));

    let out = run_in(dir.path(), &["chart", "from-polys", "pc.json"]);
    assert!(out.status.success());
    let back: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let original: serde_json::Value = serde_json::from_str(POINT).unwrap();
    assert_eq!(back, original);
}

#[test]
fn from_polys_without_roots_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let pc = r#"{"cartan":"A1","alpha":{"1":1},"p":{"1":["0","1"]},"q":{"1":["1"]}}"#;
    fs::write(dir.path().join("pc.json"), pc).unwrap();
    let out = run_in(dir.path(), &["chart", "from-polys", "pc.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flow_emits_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("point.json"), POINT).unwrap();
    let out = run_in(
        dir.path(),
        &[
            "flow", "--hamiltonian", "e1:1", "--point", "point.json", "--t", "0.5", "--dt",
            "0.01", "--out", "traj.csv", "--report", "report.json",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("traj.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,re_x:1:1,im_x:1:1,re_x:2:1,im_x:2:1,re_y:1:1,im_y:1:1,re_y:2:1,im_y:2:1"
    );
    assert_eq!(csv.lines().count(), 52); // header + 51 samples
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["x_only"], serde_json::json!(true));
    let drift = report["max_relative_drift"]["e1:1"].as_f64().unwrap();
    assert!(drift <= 1e-9);
}

#[test]
fn jacobi_check_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let point = dir.path().join("point.json");
    fs::write(&point, POINT).unwrap();
    let out = run(&["jacobi-check", "--point", point.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["points"], serde_json::json!(1));
    assert_eq!(report["triples"], serde_json::json!(4)); // C(4,3)
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn oracle_check_passes() {
    let out = run(&["oracle-check", "--cartan", "B2", "--alpha", "2,1", "--seed", "3", "--points", "20"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["comparisons"].as_u64().unwrap() > 0);
}

#[test]
fn omega_matrix_json() {
    let dir = tempfile::tempdir().unwrap();
    let point = dir.path().join("point.json");
    fs::write(&point, POINT).unwrap();
    let out = run(&["omega", "--point", point.to_str().unwrap()]);
    assert!(out.status.success());
    let m: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // x-x entry: i·j/(x1 - x2) = -1/(0-2) = 1/2; x-y diagonal: -1/y
    assert_eq!(m[0][1], serde_json::json!("1/2"));
    assert_eq!(m[0][2], serde_json::json!("-1"));
    assert_eq!(m[1][3], serde_json::json!("-1/3"));
    assert_eq!(m[2][3], serde_json::json!("0"));
}
