//! End-to-end tests of the binary: exit codes, byte stability, error
//! codes, and JSON round-trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run_tool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on_fixture(command: &str, name: &str) -> Output {
    let input = fixture(name);
    run_tool(&[command, "--input", input.to_str().unwrap()])
}

#[test]
fn integrability_exit_code_and_payload() {
    let out = run_on_fixture("integrability", "am-s2xs2.json");
    assert_eq!(
        out.status.code(),
        Some(2),
        "dense periods are not integrable"
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "not-integrable");
    assert_eq!(report["payload"]["free_rank"], 2);
    assert_eq!(report["payload"]["real_span_dim"], 1);
    assert_eq!(report["payload"]["generators"][0][0], "1");
    assert_eq!(report["payload"]["generators"][1][0], "λ");
}

#[test]
fn homology_of_the_tetra_fixture() {
    let out = run_on_fixture("homology", "tetra-boundary.json");
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "ok");
    assert_eq!(report["payload"]["betti"], serde_json::json!([1, 0, 1]));
    assert_eq!(report["payload"]["euler_characteristic"], 2);
}

#[test]
fn lift_reports_match_the_schema() {
    for (cmd, fix) in [
        ("lift-am", "am-s2xs2.json"),
        ("lift-dr", "derham-s2xs2.json"),
    ] {
        let out = run_on_fixture(cmd, fix);
        assert_eq!(out.status.code(), Some(0), "{cmd} must succeed");
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let payload = &report["payload"];
        for key in [
            "n",
            "u",
            "total_periods",
            "fiber_map",
            "kernel",
            "discrete",
            "degenerate",
        ] {
            assert!(!payload[key].is_null(), "{cmd}: missing key {key}");
        }
        assert_eq!(payload["discrete"], true);
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for (cmd, fix) in [
        ("integrability", "am-s2xs2.json"),
        ("lift-am", "am-s2xs2.json"),
        ("lift-dr", "derham-s2xs2.json"),
        ("homology", "tetra-boundary.json"),
        ("equivariant", "z2-swap-action.json"),
        ("verify", "am-s2xs2.json"),
    ] {
        let a = run_on_fixture(cmd, fix);
        let b = run_on_fixture(cmd, fix);
        assert_eq!(a.stdout, b.stdout, "{cmd} output must be byte-stable");
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let input = fixture("am-s2xs2.json");
    let with_file = run_tool(&[
        "lift-am",
        "--input",
        input.to_str().unwrap(),
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(with_file.status.code(), Some(0));
    let on_stdout = run_on_fixture("lift-am", "am-s2xs2.json");
    let file_bytes = std::fs::read(&out_path).unwrap();
    assert_eq!(file_bytes, on_stdout.stdout);
}

#[test]
fn payload_round_trips_through_the_schema_types() {
    fn round_trip<T: serde::de::DeserializeOwned + serde::Serialize>(cmd: &str, fix: &str) {
        let out = run_on_fixture(cmd, fix);
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let payload: T = serde_json::from_value(report["payload"].clone()).unwrap();
        let back = serde_json::to_value(&payload).unwrap();
        assert_eq!(back, report["payload"], "{cmd} payload must round-trip");
    }
    round_trip::<algd_cli::schema::LiftPayload>("lift-am", "am-s2xs2.json");
    round_trip::<algd_cli::schema::LiftPayload>("lift-dr", "derham-s2xs2.json");
    round_trip::<algd_cli::schema::HomologyReport>("homology", "tetra-boundary.json");
    round_trip::<algd_cli::schema::MonodromyPayload>("integrability", "am-s2xs2.json");
    round_trip::<algd_cli::schema::VerifyPayload>("verify", "am-s2xs2.json");
    round_trip::<algd_cli::schema::EquivariantPayload>("equivariant", "z2-swap-action.json");
}

#[test]
fn missing_input_is_an_io_error() {
    let out = run_tool(&["homology", "--input", "/nonexistent/input.json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "error");
    assert_eq!(report["payload"]["code"], "io-error");
}

#[test]
fn malformed_json_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run_tool(&["integrability", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["payload"]["code"], "parse-error");
}

#[test]
fn schema_violation_has_its_own_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("incomplete.json");
    // valid JSON, but neither periods nor complex+cochain
    std::fs::write(&path, r#"{"symbols": ["λ"], "simply_connected": true}"#).unwrap();
    let out = run_tool(&["integrability", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["payload"]["code"], "schema-error");
}

#[test]
fn trivial_class_error_from_lift_am() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    std::fs::write(
        &path,
        r#"{"symbols": [], "simply_connected": true, "periods": [["0"], ["0"]]}"#,
    )
    .unwrap();
    let out = run_tool(&["lift-am", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["payload"]["code"], "trivial-class");
}

#[test]
fn not_simply_connected_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cover.json");
    std::fs::write(
        &path,
        r#"{"symbols": ["λ"], "simply_connected": false, "periods": [["1"], ["λ"]]}"#,
    )
    .unwrap();
    let out = run_tool(&["integrability", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["payload"]["code"], "not-simply-connected");
}

#[test]
fn equivariant_fixture_certifies() {
    let out = run_on_fixture("equivariant", "z2-swap-action.json");
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let payload = &report["payload"];
    assert_eq!(payload["assumptions"], true);
    assert_eq!(payload["theta_equivariant"], true);
    assert_eq!(payload["discrete"], true);
    assert_eq!(
        payload["period_matrix"],
        serde_json::json!([["1", "0"], ["0", "1"]])
    );
}

#[test]
fn explicit_periods_input_works() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("explicit.json");
    std::fs::write(
        &path,
        r#"{"symbols": ["λ"], "simply_connected": true, "periods": [["1"], ["λ"]]}"#,
    )
    .unwrap();
    let direct = run_tool(&["integrability", "--input", path.to_str().unwrap()]);
    let via_complex = run_on_fixture("integrability", "am-s2xs2.json");
    // the two input forms agree on the payload
    let a: serde_json::Value = serde_json::from_slice(&direct.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&via_complex.stdout).unwrap();
    assert_eq!(a["payload"], b["payload"]);
}
