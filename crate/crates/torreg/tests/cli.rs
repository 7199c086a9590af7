//! End-to-end tests of the `torreg` binary: JSON output shape and
//! round-tripping, SVG staircase re-parsing, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn hirz2(dir: &tempfile::TempDir) -> PathBuf {
    fixture(
        dir,
        "hirz2.json",
        r#"{"rays": [[1,0],[0,1],[-1,2],[0,-1]], "max_cones": [[0,1],[1,2],[2,3],[3,0]]}"#,
    )
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torreg"))
        .args(args)
        .env("TORREG_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn variety_reports_cox_data() {
    let dir = tempfile::tempdir().unwrap();
    let fan = hirz2(&dir);
    let v = stdout_json(&run(&["variety", fan.to_str().unwrap()]));
    assert_eq!(v["picard_rank"], 2);
    assert_eq!(
        v["var_degrees"],
        serde_json::json!([[1, 0], [-2, 1], [1, 0], [0, 1]])
    );
    assert_eq!(v["nef"]["rays"], serde_json::json!([[0, 1], [1, 0]]));
    assert_eq!(v["eff"]["rays"], serde_json::json!([[-2, 1], [1, 0]]));
    assert_eq!(v["chambers"].as_array().unwrap().len(), 2);
    assert_eq!(v["walls"].as_array().unwrap().len(), 1);
    // irrelevant ideal has one generator per maximal cone
    assert_eq!(v["irrelevant_generators"].as_array().unwrap().len(), 4);
}

#[test]
fn reg_json_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let fan = hirz2(&dir);
    let args = [
        "reg",
        "--variety",
        fan.to_str().unwrap(),
        "--window",
        "-3,-3:3,3",
    ];
    let first = run(&args);
    let v = stdout_json(&first);
    assert_eq!(v["region"]["minima"], serde_json::json!([[0, 1], [1, 0]]));
    assert_eq!(v["region"]["certification"], "exact");
    assert_eq!(v["containment"]["nef_ok"], true);
    // parse -> serialize -> parse fixpoint
    let reserialized = serde_json::to_string(&v).unwrap();
    let reparsed: Value = serde_json::from_str(&reserialized).unwrap();
    assert_eq!(v, reparsed);
    // deterministic output
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn svg_staircase_corners_match_minima() {
    let dir = tempfile::tempdir().unwrap();
    let fan = hirz2(&dir);
    let ideal = fixture(&dir, "ideal.json", r#"{"gens": [[1,0,0,1],[0,2,4,0]]}"#);
    let svg_path = dir.path().join("reg.svg");
    let out = run(&[
        "reg",
        "--variety",
        fan.to_str().unwrap(),
        "--ideal",
        ideal.to_str().unwrap(),
        "--window",
        "-1,-1:5,5",
        "--svg",
        svg_path.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    let minima: Vec<Vec<i64>> = serde_json::from_value(v["region"]["minima"].clone()).unwrap();
    assert_eq!(minima, vec![vec![1, 3], vec![2, 2]]);

    let svg = std::fs::read_to_string(&svg_path).unwrap();
    let start = svg.find("class=\"staircase\" points=\"").unwrap()
        + "class=\"staircase\" points=\"".len();
    let end = svg[start..].find('"').unwrap() + start;
    let verts: Vec<Vec<i64>> = svg[start..end]
        .split_whitespace()
        .map(|p| p.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    // inner corners of the staircase polyline are the region minima
    let corners: Vec<Vec<i64>> = verts.iter().skip(1).step_by(2).cloned().collect();
    assert_eq!(corners, minima);
}

#[test]
fn powers_verifies_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let fan = hirz2(&dir);
    let ideal = fixture(&dir, "ideal.json", r#"{"gens": [[0,0,0,1],[3,1,0,0]]}"#);
    let out = run(&[
        "powers",
        "--variety",
        fan.to_str().unwrap(),
        "--ideal",
        ideal.to_str().unwrap(),
        "--n",
        "2",
        "--window",
        "-1,-1:7,7",
    ]);
    let v = stdout_json(&out);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["reg"]["minima"], serde_json::json!([[0, 2], [2, 1]]));
    for r in reports {
        assert_eq!(r["verdicts"]["inner_in_reg"], true);
        assert_eq!(r["verdicts"]["reg_in_outer"], true);
        assert_eq!(r["witness"], Value::Null);
    }
}

#[test]
fn bounds_without_regions() {
    let dir = tempfile::tempdir().unwrap();
    let fan = hirz2(&dir);
    let out = run(&[
        "bounds",
        "--variety",
        fan.to_str().unwrap(),
        "--degrees",
        "1,1;0,2",
        "--n",
        "3",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["q1_candidates"], serde_json::json!([[1, 2]]));
    assert_eq!(v["q2_candidates"], serde_json::json!([[0, 1]]));
    assert_eq!(v["outer_translate"], serde_json::json!([0, 3]));
    assert_eq!(v["a"], Value::Null);
}

#[test]
fn certify_along_a_ray() {
    let dir = tempfile::tempdir().unwrap();
    let fan = hirz2(&dir);
    let out = run(&[
        "certify",
        "--variety",
        fan.to_str().unwrap(),
        "--window",
        "-2,1:-1,1",
    ]);
    let v = stdout_json(&out);
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 2);
    for e in entries {
        // both degrees sit in the non-nef chamber: certificates exist
        assert!(e["certificate"].is_object(), "entry {e}");
        assert!(e["certificate"]["witnesses"].as_array().unwrap().len() >= 1);
    }
}

#[test]
fn zero_sheaf_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let fan = hirz2(&dir);
    let zero = fixture(&dir, "zero.json", r#"{"gens": []}"#);
    let out = run(&[
        "reg",
        "--variety",
        fan.to_str().unwrap(),
        "--ideal",
        zero.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sheaf is zero"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = fixture(&dir, "bad.json", "{not json");
    let out = run(&["variety", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let fan = hirz2(&dir);
    let out = run(&[
        "reg",
        "--variety",
        fan.to_str().unwrap(),
        "--window",
        "3,3:0,0",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "reg",
        "--variety",
        fan.to_str().unwrap(),
        "--field",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
