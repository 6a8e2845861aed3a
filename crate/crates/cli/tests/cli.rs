use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn toda2d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toda2d"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn verify_myb_passes_and_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let args = ["verify", "myb", "--n", "5", "--seed", "7", "--samples", "10"];
    let a = toda2d(&args);
    let b = toda2d(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).lines().all(|l| l.starts_with("PASS ")));
    let report = read_json(&out);
    assert_eq!(report["passed"], Value::Bool(true));
    assert_eq!(report["config"]["seed"], 7);
}

#[test]
fn verify_reports_a_failing_identity_with_exit_one() {
    let o = toda2d(&["verify", "crosscheck", "--samples", "1", "--transcription", "printed"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("PASS crosscheck/P1-formula-vs-tensor"));
    assert!(text.contains("FAIL crosscheck/P3-formula-vs-tensor"));
    assert!(text.contains("terms missing from the printed range"));
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        vec!["verify", "zs", "--n", "4"],
        vec!["verify", "zs", "--depth", "2"],
        vec!["verify", "nothing"],
        vec!["verify", "zs", "--mode", "fuzzy"],
        vec!["evolve", "t1", "1", "0.1", "--mode", "exact"],
        vec!["evolve", "t0", "1", "0.1"],
        vec!["bracket", "1", "u2", "0", "u0", "1"],
    ] {
        let o = toda2d(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = toda2d(&["bracket", "1", "u2", "0", "u0", "1"]);
    assert!(stderr(&o).contains("unsupported coordinate index: u2"));
}

#[test]
fn bracket_prints_terms_and_both_values() {
    let o = toda2d(&["bracket", "1", "u0", "3", "ubar-1", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("-1·ubar-1(n)·δ(n-m+0)"));
    assert!(text.contains("+1·ubar-1(m)·δ(n-m+1)"));
    let value = text.lines().find(|l| l.starts_with("value")).unwrap();
    let tensor = text.lines().find(|l| l.starts_with("tensor")).unwrap();
    assert_eq!(value.rsplit(' ').next(), tensor.rsplit(' ').next());
}

#[test]
fn second_bracket_of_neighbouring_u0() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    fs::write(
        &state,
        r#"{"N": 5, "M": 3, "Mbar": 1, "u": {"-1": ["1/2", "3", "-1", "0", "2"]}, "ubar": {}}"#,
    )
    .unwrap();
    let o = toda2d(&["bracket", "2", "u0", "0", "u0", "1", "--state", state.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // {u0(n), u0(m)}_2 = u-1(m) δ(n-m+1) - u-1(n) δ(n-m-1), at n = 0, m = 1.
    assert!(stdout(&o).contains("value at n=0, m=1: 3/1"));
}

#[test]
fn state_export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let o = toda2d(&["state", "export", "--n", "5", "--seed", "3", "--out", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = toda2d(&["state", "import", a.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("N=5 M=4 Mbar=3"));
    assert_eq!(read_json(&a), read_json(&b));
}

#[test]
fn zero_duration_returns_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("s.json");
    let traj = dir.path().join("t.json");
    toda2d(&["state", "export", "--mode", "float", "--n", "6", "--out", state.to_str().unwrap()]);
    let o = toda2d(&["evolve", "tbar1", "0", "1e-3", "--state", state.to_str().unwrap(), "--out", traj.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = read_json(&traj);
    let snaps = t["snapshots"].as_array().unwrap();
    assert_eq!(snaps.len(), 1);
    assert_eq!(snaps[0]["state"], read_json(&state));
}

#[test]
fn evolve_keeps_h1_within_drift_budget() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.json");
    let o = toda2d(&["evolve", "t1", "1.0", "1e-3", "--ledger", "h1", "--out", traj.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = read_json(&traj);
    let values: Vec<f64> = t["snapshots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["hamiltonians"][0].as_f64().unwrap())
        .collect();
    let h0 = values[0];
    assert!(values.iter().all(|h| ((h - h0) / h0).abs() < 1e-8));
    assert!(stdout(&o).contains("h1 = "));
}

#[test]
fn blow_up_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("s.json");
    fs::write(
        &state,
        r#"{"N": 5, "M": 2, "Mbar": 1, "u": {"-1": [1e300, -1e300, 1e300, 0, 2e300]}, "ubar": {}}"#,
    )
    .unwrap();
    let o = toda2d(&["evolve", "t2", "1", "0.5", "--state", state.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("integration step rejected"));
}

#[test]
fn toda_check_converges_at_second_order() {
    let o = toda2d(&["toda", "--n", "8", "--step", "1e-2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ratio: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("ratio "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((3.5..4.5).contains(&ratio), "{ratio}");
}
