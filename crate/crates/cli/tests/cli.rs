use std::path::Path;
use std::process::{Command, Output};

use aqd_cli::config::RunConfig;
use aqd_core::TraceOut;
use serde_json::Value;

fn aqd(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqd"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(text.lines().count(), 1, "{text}");
    serde_json::from_str(text.trim()).unwrap()
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        n: 30,
        u_over_t: 0.5,
        ..RunConfig::default()
    };
    std::fs::write(dir.path().join("c.json"), cfg.to_json()).unwrap();
    let out = aqd(
        &[
            "--config",
            "c.json",
            "--dump-config",
            "evolve",
            "--u",
            "0.7",
            "--trace-out",
            "pool",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let got = RunConfig::from_json(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(got.n, 30);
    assert_eq!(got.u_over_t, 0.7);
    assert_eq!(got.trace_out, TraceOut::Pool);
}

#[test]
fn evolve_csv_layout_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = aqd(
        &[
            "--out",
            "e.csv",
            "evolve",
            "--n",
            "4",
            "--u",
            "0.5",
            "--trace-out",
            "qubit",
            "--t-coupling",
            "2",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("e.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "t,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,re_c4,im_c4,concurrence_tripartite,eof_qubit_qutrit,negativity_qubit_qutrit"
    );
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("e.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["summary"]["status"], "ok");
    assert_eq!(meta["config"]["t_coupling"], 2.0);
    // Times are written in units of 1/T with T = 2.
    let second: f64 = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .nth(2)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((second - meta["summary"]["dt"].as_f64().unwrap()).abs() < 1e-15);
}

#[test]
fn sidecar_can_be_disabled() {
    let dir = tempfile::tempdir().unwrap();
    let out = aqd(&["--out", "s.csv", "--seed-metadata", "false", "spectrum"], dir.path());
    assert!(out.status.success());
    assert!(dir.path().join("s.csv").exists());
    assert!(!dir.path().join("s.csv.meta.json").exists());
}

#[test]
fn json_format_is_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let out = aqd(
        &["--format", "json", "sweep", "--n-list", "10", "--u-steps", "3"],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    assert_eq!(doc["columns"][7], "status");
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["evolve", "--measures", "concurrence"][..],
        &["evolve", "--measures", "eof_two_qubit", "--trace-out", "qubit"][..],
        &["sweep", "--u-min", "1", "--u-max", "0.5"][..],
        &["--threads", "0", "sweep"][..],
        &["--config", "missing.json", "evolve"][..],
    ] {
        let out = aqd(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr_json(&out)["error"], "config");
    }
}

#[test]
fn missing_period_exits_three_after_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = aqd(&["--out", "x.csv", "evolve", "--t-max", "0.3"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "runtime");
    let meta = std::fs::read_to_string(dir.path().join("x.csv.meta.json")).unwrap();
    assert!(meta.contains("period_not_found"));
}
