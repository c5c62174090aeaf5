//! End-to-end tests of the command-line interface: golden outputs, exit
//! codes, determinism, and serialization round-trips through files.

use std::process::{Command, Output};

fn qstirling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qstirling"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn stirling_csv_golden_row() {
    let out = qstirling(&["stirling", "--family", "q_second", "--n-max", "3", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1,1,1\n2,1,1\n2,2,q\n3,1,1\n3,2,2*q + q^2\n3,3,q^3\n");
}

#[test]
fn stirling_classical_entry() {
    let out = qstirling(&["stirling", "--family", "classical_second", "--n-max", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("(3,2) 3\n"));
}

#[test]
fn stirling_unknown_family_is_usage_error() {
    let out = qstirling(&["stirling", "--family", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn normal_order_golden_lines() {
    let out = qstirling(&["normal-order", "--m", "2", "--kind", "G"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "k=1: p^(1*n) * 1 ; k=2: q\n");

    let out = qstirling(&["normal-order", "--m", "2", "--kind", "M"]);
    assert_eq!(stdout(&out), "k=1: 1 ; k=2: q\n");

    let out = qstirling(&["normal-order", "--inverse", "--k", "2", "--kind", "M"]);
    assert_eq!(stdout(&out), "m=1: -1*q^-1 ; m=2: q^-1\n");
}

#[test]
fn normal_order_json_round_trips() {
    let out = qstirling(&["normal-order", "--m", "3", "--kind", "G", "--format", "json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let parsed = qstirling::boson::normal_form_from_json(&value).unwrap();
    let direct = qstirling::boson::normal_order_power(
        3,
        qstirling::bracket::BracketKind::G,
        qstirling::boson::QChoice::QEqualsQ,
    );
    assert_eq!(parsed.coeffs, direct.coeffs);
}

#[test]
fn stirling_json_round_trips_through_file() {
    let dir = std::env::temp_dir().join(format!("qstirling-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.json");
    let out = qstirling(&[
        "stirling",
        "--family",
        "reduced_second_Xi",
        "--n-max",
        "5",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let table = qstirling::stirling::table_from_json(&value).unwrap();
    assert_eq!(
        table,
        qstirling::stirling::build_table(qstirling::stirling::StirlingFamily::ReducedSecondXi, 5)
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_single_identity_passes() {
    let out = qstirling(&["verify", "--only", "E24_COMMUTATOR", "--dim", "10", "--kind", "P"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = value.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["pass"], serde_json::json!(true));
    assert_eq!(reports[0]["counterexample"], serde_json::Value::Null);
}

#[test]
fn verify_dim_bounds_are_usage_errors() {
    let out = qstirling(&["verify", "--dim", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qstirling(&["verify", "--dim", "65"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qstirling(&["verify", "--only", "NO_SUCH_ID"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suite_exits_zero_at_small_size() {
    // The complete suite at reduced size, to keep the test quick; the
    // full default run is exercised by the acceptance suite.
    let out = qstirling(&["verify", "--n-max", "5", "--dim", "6", "--format", "text"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("[PASS]")));
}

#[test]
fn series_reports_zero_residual() {
    let out = qstirling(&["series", "--what", "commutator", "--level", "1", "--order", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("residual (through degree 2): 0\n"));

    let out = qstirling(&["series", "--what", "hamiltonian", "--level", "0", "--order", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("value: 1/2\n"));
    assert!(text.contains("residual (through degree 1): 0\n"));

    let out = qstirling(&["series", "--what", "hamiltonian", "--level", "3", "--order", "1"]);
    assert!(stdout(&out).contains("residual (through degree 1): 0\n"));
}

#[test]
fn series_json_shape() {
    let out = qstirling(&[
        "series", "--what", "hamiltonian", "--level", "1", "--order", "1", "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["value"]["s^0 t^0"], serde_json::json!("3/2"));
    assert_eq!(value["value"]["s^1 t^0"], serde_json::json!("1/2"));
    assert_eq!(value["residual"], serde_json::json!({}));
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["verify", "--n-max", "4", "--dim", "5", "--format", "text"];
    let parallel = qstirling(&args);
    let serial = Command::new(env!("CARGO_BIN_EXE_qstirling"))
        .args(args)
        .env("QSTIRLING_THREADS", "1")
        .output()
        .expect("binary runs");
    assert!(parallel.status.success());
    assert!(serial.status.success());
    assert_eq!(stdout(&parallel), stdout(&serial));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["stirling", "--family", "wachs_white_second", "--n-max", "6", "--format", "json"],
        vec!["normal-order", "--m", "4", "--kind", "G", "--format", "json"],
        vec!["verify", "--only", "DUALITY", "--format", "json"],
    ] {
        let a = qstirling(&args);
        let b = qstirling(&args);
        assert_eq!(stdout(&a), stdout(&b), "non-deterministic output for {args:?}");
        assert!(!stdout(&a).is_empty());
    }
}
