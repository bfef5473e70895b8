use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn kgdual(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgdual"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn run_config(mode: &str, cfg: &Path, out: &Path) -> Output {
    kgdual(&[mode, cfg.to_str().unwrap()], out)
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("config.json");
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn exemplary_configuration_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("verify", &config("exemplary.json"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(dir.path());
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["passed"], true);
    assert_eq!(r["conventions"]["rng"], "ChaCha8");
    assert_eq!(r["checks"].as_array().unwrap().len(), 18);
}

#[test]
fn lambda_on_minkowski_fails_cond00() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("verify", &config("minkowski_lambda.json"), dir.path());
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("FAIL") && l.contains("cond00")));
    let r = report(dir.path());
    let cond = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "cond00").unwrap();
    assert_eq!(cond["passed"], false);
}

#[test]
fn malformed_json_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "{\"ansatz\": ");
    let o = run_config("verify", &cfg, dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn unknown_keys_and_missing_seed_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"ansatz": {}, "sample_points": {"count": 4, "seed": 1}, "extra": 0}"#);
    assert_eq!(run_config("verify", &cfg, dir.path()).status.code(), Some(2));
    let cfg = write_config(dir.path(), r#"{"ansatz": {}, "checks": [{"name": "kg1"}], "sample_points": {"count": 4}}"#);
    assert_eq!(run_config("verify", &cfg, dir.path()).status.code(), Some(2));
    let o = kgdual(&["verify", cfg.to_str().unwrap(), "--seed", "12"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(dir.path())["config"]["sample_points"]["seed"], 12);
}

#[test]
fn mode_mismatch_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_config("sweep", &config("exemplary.json"), dir.path()).status.code(), Some(2));
}

#[test]
fn cfl_violation_refuses_to_start() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"solver": {"grid": {"n": 64, "courant": 1.5}, "mass": 1, "init": {"kind": "two_mode"}, "steps": 10}}"#,
    );
    assert_eq!(run_config("solve", &cfg, dir.path()).status.code(), Some(2));
    assert!(!dir.path().join("trajectory.csv").exists());
}

#[test]
fn mass_from_lambda_matches_unit_mass() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("solve", &config("solve_mass_from_lambda.json"), dir.path());
    assert_eq!(o.status.code(), Some(0));
    let a = report(dir.path());
    let w = a["solver"]["omega_measured"].as_f64().unwrap();
    assert!((w - 1.0).abs() < 1e-3);

    let text = fs::read_to_string(config("solve_mass_from_lambda.json")).unwrap();
    let cfg = write_config(dir.path(), &text.replace(r#"{ "from_lambda": 3 }"#, "1.0"));
    assert_eq!(run_config("solve", &cfg, dir.path()).status.code(), Some(0));
    let b = report(dir.path());
    assert_eq!(a["solver"]["omega_measured"], b["solver"]["omega_measured"]);

    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,x,re_phi,im_phi,rho,s_q");
    assert_eq!(csv.lines().count(), 1 + 34 * 256);
}

#[test]
fn sweep_reports_orders_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("sweep", &config("sweep.json"), dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path());
    let trace = r["sweeps"].as_array().unwrap().iter().find(|s| s["check"] == "trace").unwrap();
    assert!(trace["slope"].as_f64().unwrap() >= 1.9);
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    for check in ["trace", "continuity", "momentum"] {
        let gaps: Vec<f64> = csv
            .lines()
            .filter(|l| l.starts_with(&format!("{check},")))
            .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(gaps.len(), 4);
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{check}: {gaps:?}");
    }
}

#[test]
fn disabled_perturbations_give_a_degenerate_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"ansatz": {"omega_bar": {}, "b": {}, "gamma": {"kind": "none"}},
            "sample_points": {"count": 3, "seed": 1}}"#,
    );
    let o = run_config("sweep", &cfg, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path());
    assert!(r["sweeps"].as_array().unwrap().iter().all(|s| s["degenerate"] == true));
}

#[test]
fn runs_are_deterministic_and_the_echo_revalidates() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert_eq!(run_config("sweep", &config("sweep.json"), d.path()).status.code(), Some(0));
    }
    let strip = |d: &Path| {
        let mut v = report(d);
        v.as_object_mut().unwrap().remove("wall_time_seconds");
        v
    };
    assert_eq!(strip(a.path()), strip(b.path()));
    assert_eq!(
        fs::read(a.path().join("sweep.csv")).unwrap(),
        fs::read(b.path().join("sweep.csv")).unwrap()
    );

    let echo = serde_json::to_string(&report(a.path())["config"]).unwrap();
    let c = tempfile::tempdir().unwrap();
    let cfg = write_config(c.path(), &echo);
    assert_eq!(run_config("sweep", &cfg, c.path()).status.code(), Some(0));
    assert_eq!(strip(c.path()), strip(a.path()));
}

#[test]
fn thread_cap_is_honoured_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_kgdual"))
            .args(["verify", config("minkowski_lambda.json").to_str().unwrap(), "--out"])
            .arg(dir.path())
            .env("KGDUAL_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(1));
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn tolerance_scale_loosens_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = kgdual(
        &["verify", config("minkowski_lambda.json").to_str().unwrap(), "--tolerance-scale", "1e8"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let o = kgdual(&["verify", config("minkowski_lambda.json").to_str().unwrap(), "--tolerance-scale", "-1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
