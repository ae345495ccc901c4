use std::path::PathBuf;
use std::process::{Command, Output};

fn cstip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cstip")).args(args).env_remove("CSTIP_TOL").output().unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cstip-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const UNIT: &str = r#""plus": {"G": 1, "nu": 0.3, "l": 1, "eta": 1}, "minus": {"G": 1, "nu": 0.3, "l": 1, "eta": 1}, "problem": "CS_CS""#;

#[test]
fn fields_two_by_two_grid() {
    let cfg = scratch("grid.json", &format!(r#"{{{UNIT}, "grid": {{"r_min": 1, "r_max": 2, "n_r": 2, "n_theta": 2}}}}"#));
    let out = cstip(&["fields", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "r,theta,side,w,sigma13,sigma23,mu11,mu12,mu21,mu22,tau13,tau23");
    assert_eq!(rows.len(), 9);
    assert_eq!(rows.iter().filter(|r| r.contains(",upper,")).count(), 4);
    assert_eq!(rows.iter().filter(|r| r.contains(",lower,")).count(), 4);
    let tau23: f64 = rows[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!((tau23 + 1.5).abs() < 1e-12);
}

#[test]
fn fields_order_beyond_truncation_exits_2() {
    let cfg = scratch("order.json", &format!(r#"{{{UNIT}, "order": 3.0}}"#));
    let out = cstip(&["fields", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let diag: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["exit_code"], 2);
}

#[test]
fn analyze_writes_json_to_out() {
    let dir = std::env::temp_dir().join(format!("cstip-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.json");
    let out = cstip(&["analyze", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["kappa", "C", "D", "case", "gamma", "roots", "modes"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["case"], "REAL_DOUBLE");
}

#[test]
fn config_errors_exit_2() {
    let bad_eta = scratch("eta.json", &format!("{{{}}}", UNIT.replacen(r#""eta": 1"#, r#""eta": -1"#, 1)));
    assert_eq!(cstip(&["analyze", "--config", bad_eta.to_str().unwrap()]).status.code(), Some(2));
    let mismatch = scratch("kind.json", &format!("{{{}}}", UNIT.replace("CS_CS", "CS_CLASSICAL_COUPLE")));
    assert_eq!(cstip(&["analyze", "--config", mismatch.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(cstip(&["frobnicate"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_cstip")).arg("analyze").env("CSTIP_TOL", "-1").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_refuses_eta_at_minus_one() {
    let cfg = scratch("sweep-bad.json", &format!(r#"{{{UNIT}, "sweep": {{"parameter": "eta", "from": 1, "to": -1, "steps": 11, "ab_ratios": [3]}}}}"#));
    let out = cstip(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn sweep_rows_follow_input_order() {
    let cfg = scratch("sweep.json", &format!(r#"{{{UNIT}, "sweep": {{"parameter": "eta", "from": 1, "to": 0, "steps": 3, "ab_ratios": [6, 1]}}}}"#));
    let a = cstip(&["sweep", "--config", cfg.to_str().unwrap()]);
    let b = cstip(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let values: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(values, vec![(6.0, 1.0), (6.0, 0.5), (6.0, 0.0), (1.0, 1.0), (1.0, 0.5), (1.0, 0.0)]);
}

#[test]
fn verify_default_passes_and_negative_control_fails() {
    assert_eq!(cstip(&["verify"]).status.code(), Some(0));
    assert_eq!(cstip(&["verify", "--strict-paper", "false"]).status.code(), Some(0));
    let cfg = scratch("perturbed.json", &format!(r#"{{{UNIT}, "kappa_perturbation": 1e-3}}"#));
    let out = cstip(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn jint_reports_closed_form() {
    let out = cstip(&["jint"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let j = v["J_star_numeric"].as_f64().unwrap();
    assert!((j / (9.0 * std::f64::consts::PI) - 1.0).abs() < 1e-6);
}
