use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qlaplace"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn sweep(config: &Path, out: &Path, extra: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = bin();
    cmd.args(["sweep", "--config", s(config), "--out", s(out)]).args(extra);
    if let Some(t) = threads {
        cmd.env("QLAPLACE_THREADS", t);
    }
    cmd.output().unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn sweep_step_compare() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"function": {"kind": "heaviside_step"}, "p_grid": [2], "q_grid": [1.5],
            "methods": ["quadrature", "closedform"], "compare": true}"#,
    );
    let out = dir.path().join("o.csv");
    let o = sweep(&cfg, &out, &[], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let header = std::fs::read_to_string(&out).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "re_p,im_p,q,re_L,im_L,abs_err,converged,method,rel_diff");
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][7], "quadrature");
    assert_eq!(rows[1][7], "closedform");
    for r in &rows {
        assert!((r[3].parse::<f64>().unwrap() - 1.0).abs() < 1e-8);
    }
    let rel: f64 = rows[0][8].parse().unwrap();
    assert!(rel < 1e-6);
}

#[test]
fn sweep_compare_with_default_method() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1, 2], "q_grid": [1.5], "compare": true}"#,
    );
    let out = dir.path().join("o.csv");
    assert_eq!(code(&sweep(&cfg, &out, &[], None)), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[8].parse::<f64>().unwrap() < 1e-6));
}

#[test]
fn unsupported_closed_form_rows_do_not_fail_the_sweep() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"function": {"kind": "power_window", "lambda": 1, "beta": 2, "a": 0.5, "b": 3},
            "p_grid": [[2, -1]], "q_grid": [1.3], "methods": ["quadrature", "closedform"]}"#,
    );
    let out = dir.path().join("o.csv");
    let o = sweep(&cfg, &out, &[], None);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside the supported envelope"));
    let rows = csv_rows(&out);
    assert_eq!((rows[0][6].as_str(), rows[1][6].as_str()), ("true", "false"));
}

#[test]
fn sweep_json_output() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"function": {"kind": "heaviside_step"}, "p_grid": [[1, 1]]}"#);
    let out = dir.path().join("o.json");
    let o = sweep(&cfg, &out, &["--format", "json"], None);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let row = &v.as_array().unwrap()[0];
    assert!((row["re_L"].as_f64().unwrap() - 0.5).abs() < 1e-8);
    assert!((row["im_L"].as_f64().unwrap() + 0.5).abs() < 1e-8);
}

#[test]
fn sweep_partition_row() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"function": {"kind": "constant", "c": 1}, "variant": "partition", "p_grid": [2], "q_grid": [1.5]}"#,
    );
    let out = dir.path().join("o.csv");
    assert_eq!(code(&sweep(&cfg, &out, &[], None)), 0);
    let rows = csv_rows(&out);
    assert!((rows[0][3].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn config_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o.csv");
    let empty = write(&dir, "e.json", r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1], "q_grid": []}"#);
    assert_eq!(code(&sweep(&empty, &out, &[], None)), 2);
    let bad_q = write(&dir, "q.json", r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1], "q_grid": [2.5]}"#);
    assert_eq!(code(&sweep(&bad_q, &out, &[], None)), 2);
    assert_eq!(code(&sweep(&dir.path().join("missing.json"), &out, &[], None)), 2);
    let ok = write(&dir, "ok.json", r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1]}"#);
    assert_eq!(code(&sweep(&ok, &out, &[], Some("many"))), 2);
}

#[test]
fn nonconverged_rows_exit_three_unless_allowed() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"function": {"kind": "heaviside_step"}, "p_grid": [1], "q_grid": [1.9],
            "quadrature": {"tail_policy": "compactify"}}"#,
    );
    let out = dir.path().join("o.csv");
    assert_eq!(code(&sweep(&cfg, &out, &[], None)), 3);
    assert_eq!(csv_rows(&out)[0][6], "false");
    assert_eq!(code(&sweep(&cfg, &out, &["--allow-nonconverged"], None)), 0);
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"function": {"kind": "power_window", "lambda": 1, "beta": 2, "a": 0.5, "b": 3},
            "p_grid": [0.5, 1, 2.5, 4], "q_grid": [1.1, 1.3, 1.6],
            "methods": ["quadrature", "closedform"], "compare": true}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(code(&sweep(&cfg, &a, &[], Some("1"))), 0);
    assert_eq!(code(&sweep(&cfg, &b, &[], Some("4"))), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn selftest_json_reports_every_check() {
    let o = bin().args(["selftest", "--json"]).output().unwrap();
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v.as_array().unwrap();
    assert_eq!(checks.len(), 12);
    assert!(checks.iter().all(|c| c["passed"].as_bool() == Some(true)));
}

#[test]
fn selftest_failure_exits_one() {
    let o = bin().args(["selftest", "--tolerance-scale", "0"]).output().unwrap();
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("[FAIL]"));
}

#[test]
fn invert_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o.csv");
    let step = write(&dir, "s.json", r#"{"function": {"kind": "heaviside_step"}, "epsilon": 1e-3, "t_grid": [0.5, 1, 2]}"#);
    let o = bin().args(["invert", "--config", s(&step), "--out", s(&out)]).output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("sup_error"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() <= 2e-3));

    let dens = write(
        &dir,
        "d.json",
        r#"{"function": {"kind": "q_exp_density", "alpha": 1}, "epsilon": 1e-4,
            "t_grid": {"start": 0.5, "stop": 3, "count": 6}}"#,
    );
    let o = bin().args(["invert", "--config", s(&dens), "--out", s(&out)]).output().unwrap();
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() <= 1e-3));

    let bad = write(&dir, "b.json", r#"{"function": {"kind": "heaviside_step"}, "epsilon": 1e-3, "t_grid": [0, 1]}"#);
    let o = bin().args(["invert", "--config", s(&bad), "--out", s(&out)]).output().unwrap();
    assert_eq!(code(&o), 2);
}
