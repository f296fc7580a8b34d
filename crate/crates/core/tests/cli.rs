use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dhym::cli::ManifoldFile;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn dhym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dhym"))
        .args(args)
        .env("DHYM_THREADS", "1")
        .output()
        .expect("run dhym")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn angle_of_counterexample_file() {
    let out = dhym(&[
        "angle",
        data("torus3_counterexample.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["arg"].as_f64().unwrap(), std::f64::consts::FRAC_PI_4);
    assert_eq!(v["supercritical"], Value::Bool(true));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.json", r#"{"n": 3, "intersection": [1, 2]"#);
    let out = dhym(&["angle", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "input");

    let out = dhym(&["angle", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = dhym(&["counterexample", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_dhym"))
        .args(["counterexample"])
        .env("DHYM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_volume_exit_3() {
    let out = dhym(&["angle", data("root_on_path.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"], "zero_volume");
}

#[test]
fn gamma_track_reports_obstruction_and_csv() {
    let out = dhym(&["gamma-track", data("root_on_path.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert!((v["roots"][0].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(v["root_severity"], "obstruction");

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("branch.csv");
    let out = dhym(&[
        "gamma-track",
        data("torus3_counterexample.json").to_str().unwrap(),
        "--samples",
        "50",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["theta_end"].as_f64().unwrap() - 2.25 * std::f64::consts::PI).abs() < 1e-12);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,re,im,abs,theta"));
    assert!(lines.count() >= 49);
}

#[test]
fn roots_outside_dimension_three_are_warnings_unless_strict() {
    let dir = tempfile::tempdir().unwrap();
    // I = (1, 0, 1): γ(t) = t^2 - 1
    let f = write_temp(&dir, "n2.json", r#"{"n": 2, "intersection": [1, 0, 1]}"#);
    let out = dhym(&["gamma-track", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["root_severity"], "warning");
    let out = dhym(&["gamma-track", f.to_str().unwrap(), "--strict"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn cjy_check_lists_margins_and_monotonicity() {
    let out = dhym(&[
        "cjy-check",
        data("torus3_solvable.json").to_str().unwrap(),
        "--tmax",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["in_p"], Value::Bool(true));
    let monotone = v["family_monotone"].as_array().unwrap();
    assert_eq!(monotone.len(), 2);
    assert!(monotone.iter().all(|m| m["monotone"] == Value::Bool(true)));
}

#[test]
fn counterexample_table() {
    let out = dhym(&["counterexample"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["in_P"], "yes");
    assert_eq!(v["in_K"], "no");
    assert_eq!(v["arg"].as_f64().unwrap(), std::f64::consts::FRAC_PI_4);

    let out = dhym(&["counterexample", "--n", "3", "--A", "1"]);
    let v = json(&out);
    assert_eq!(v["in_P"], "yes");
    assert_eq!(v["in_K"], "yes");
}

#[test]
fn solve_torus_small_grid_and_history_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("history.csv");
    let out = dhym(&[
        "solve-torus",
        data("torus2_deformed.json").to_str().unwrap(),
        "--grid",
        "8",
        "--steps",
        "2",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["report"]["converged"], Value::Bool(true));
    assert!(v["report"]["residual_sup"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
    let expected = 2.0 * (std::f64::consts::FRAC_PI_2 - 2f64.atan());
    assert!((v["achieved_constant"].as_f64().unwrap() - expected).abs() < 1e-9);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("iter,residual,alpha"));
}

#[test]
fn solve_torus_wrong_constant_exits_5() {
    let out = dhym(&[
        "solve-torus",
        data("torus2_deformed.json").to_str().unwrap(),
        "--grid",
        "8",
        "--steps",
        "1",
        "--theta",
        "1.2",
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(json(&out)["error"], "continuation_stalled");
}

#[test]
fn solve_torus_needs_torus_section() {
    let out = dhym(&[
        "solve-torus",
        data("torus3_solvable.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn manifold_files_round_trip() {
    for name in [
        "torus3_counterexample.json",
        "torus3_solvable.json",
        "root_on_path.json",
        "torus2_deformed.json",
        "torus2_anisotropic.json",
    ] {
        let file = ManifoldFile::load(&data(name)).unwrap();
        let text = serde_json::to_string(&file).unwrap();
        assert_eq!(ManifoldFile::from_json(&text).unwrap(), file, "{name}");
    }
}
