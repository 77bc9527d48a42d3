//! Command-line contract: usage text, exit codes, config validation and the
//! run artifacts.

use std::process::Command;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_resonance-lab")
}

#[test]
fn no_arguments_prints_usage_and_exits_zero() {
    let output = Command::new(binary()).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("Usage"), "{text}");
    assert!(text.contains("--preset"));
}

#[test]
fn unknown_preset_is_a_config_error() {
    let output = Command::new(binary())
        .args(["--preset", "frobnicate"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let text = String::from_utf8_lossy(&output.stderr);
    assert!(text.contains("unknown preset"), "{text}");
}

#[test]
fn unknown_config_key_is_rejected_with_its_name() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"scenario": "beating", "grid": {"p_max": 4, "n_q": 3}}"#,
    )
    .unwrap();
    let output = Command::new(binary())
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let text = String::from_utf8_lossy(&output.stderr);
    assert!(text.contains("n_q"), "{text}");
}

#[test]
fn invalid_parameter_reports_field_path() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad_gamma.json");
    std::fs::write(
        &path,
        r#"{"scenario": "beating", "physics": {"gamma": 0.75}}"#,
    )
    .unwrap();
    let output = Command::new(binary())
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let text = String::from_utf8_lossy(&output.stderr);
    assert!(text.contains("physics"), "{text}");
}

#[test]
fn config_file_run_writes_manifest_and_data() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("scan.json");
    std::fs::write(&path, r#"{"scenario": "gamma-scan", "seed": 3}"#).unwrap();
    let out = tmp.path().join("out");
    let output = Command::new(binary())
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["scenario"], "gamma-scan");
    assert_eq!(manifest["seed"], 3);
    assert!(manifest["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    let csv = std::fs::read_to_string(out.join("gamma_scan.csv")).unwrap();
    assert!(csv.starts_with("gamma,T_gamma,T_over_ln\n"));
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn threads_flag_is_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let status = Command::new(binary())
        .args(["--preset", "transfer-check", "--threads", "2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("transfer.csv").exists());
}
