//! End-to-end tests of the command-line binary: exit codes, output formats,
//! and byte-level determinism of the emitted files.

use std::fs;
use std::process::{Command, Output};

use catgen::wigner::WignerGrid;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catgen"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn missing_required_flags_exit_with_usage_code() {
    let out = run(&["optimize", "--order", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_table_number_is_a_usage_error() {
    let out = run(&["table", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn verify_at_tiny_dimension_reports_failures_as_json() {
    let out = run(&["verify", "--dim", "12", "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let checks: serde_json::Value =
        serde_json::from_str(&stdout_of(&out)).expect("verify --json emits valid JSON");
    let failures = checks
        .as_array()
        .expect("JSON array of checks")
        .iter()
        .filter(|c| c["pass"] == serde_json::Value::Bool(false))
        .count();
    assert!(
        failures >= 3,
        "a 12-level basis should break several identities, saw {failures}"
    );
}

#[test]
fn verify_at_default_dimension_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(
        text.contains("17 of 17 checks passed"),
        "unexpected summary:\n{text}"
    );
}

#[test]
fn optimize_emits_converged_result_json() {
    let out = run(&["optimize", "--order", "1", "--q", "-", "--alpha-scs", "0.8"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&stdout_of(&out)).expect("optimize emits valid JSON");
    let f = v["fidelity_sq"].as_f64().expect("fidelity_sq field");
    assert!(
        (f - 0.999442).abs() < 5e-4,
        "odd single-addition match at amplitude 0.8 should sit near 0.99944, got {f}"
    );
    assert_eq!(v["converged"], serde_json::Value::Bool(true));
    let q = v["q"].as_f64().expect("q field");
    assert!((q + std::f64::consts::FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn plus_shorthand_selects_the_even_angle() {
    let out = run(&["optimize", "--order", "1", "--q", "+", "--alpha-scs", "0.8"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&stdout_of(&out)).expect("optimize emits valid JSON");
    let q = v["q"].as_f64().expect("q field");
    assert!((q - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn simulate_prints_normalized_amplitudes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("photon.json");
    fs::write(
        &spec,
        r#"{"seed":[0.0,0.0],"dim":16,"steps":[{"add":true}]}"#,
    )
    .unwrap();
    let out = run(&["simulate", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("1 1 0"), "single photon line missing:\n{text}");
    assert!(text.contains("scale 1"), "scale line missing:\n{text}");
}

#[test]
fn simulate_rejects_a_malformed_circuit_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("broken.json");
    fs::write(&spec, "not a circuit {").unwrap();
    let out = run(&["simulate", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn wigner_grid_file_round_trips_and_shows_negativity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("odd.txt");
    let out = run(&[
        "wigner",
        "scs",
        "--alpha-scs",
        "1",
        "--q",
        "-",
        "--nx",
        "21",
        "--np",
        "21",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("wrote"));
    let grid = WignerGrid::from_text(&fs::read_to_string(&path).unwrap())
        .expect("emitted grid file parses back");
    // Center of the 21x21 default window is the origin, where the odd
    // superposition is maximally negative.
    assert!(grid.value(10, 10) < -0.6);
}

#[test]
fn table_runs_are_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let out_a = run(&[
        "table",
        "1",
        "--restarts",
        "4",
        "--out-dir",
        dir_a.path().to_str().unwrap(),
    ]);
    let out_b = run(&[
        "table",
        "1",
        "--restarts",
        "4",
        "--out-dir",
        dir_b.path().to_str().unwrap(),
    ]);
    assert_eq!(out_a.status.code(), out_b.status.code());
    for name in ["table1.csv", "table1.json"] {
        let bytes_a = fs::read(dir_a.path().join(name)).expect("first run wrote the file");
        let bytes_b = fs::read(dir_b.path().join(name)).expect("second run wrote the file");
        assert_eq!(bytes_a, bytes_b, "{name} differs between identical runs");
    }
}

#[test]
fn config_file_must_be_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, "{").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "verify"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_values_flow_into_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"dim":12}"#).unwrap();
    // A 12-level basis breaks several identities, so the configured
    // dimension reaching the suite shows up as the numeric exit code.
    let out = run(&["--config", cfg.to_str().unwrap(), "verify"]);
    assert_eq!(out.status.code(), Some(2));
}
