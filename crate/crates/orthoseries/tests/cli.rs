//! End-to-end checks of the command-line surface: exit codes, structured
//! errors, artifact layout, schema conformance, and byte determinism.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orthoseries"))
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orthoseries-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("create temp dir");
    dir
}

/// The generated report must carry every field the published schema
/// declares as required.
fn check_required_fields(report: &serde_json::Value, schema_file: &str) {
    let schema_path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schema")
        .join(schema_file);
    let schema: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&schema_path).expect("read schema"))
            .expect("parse schema");
    let required = schema["required"].as_array().expect("required list");
    for field in required {
        let key = field.as_str().expect("field name");
        assert!(
            report.get(key).is_some(),
            "report missing required field {key} of {schema_file}"
        );
    }
    if let Some(id) = schema["$id"].as_str() {
        assert_eq!(report["schema"].as_str(), Some(id));
    }
}

#[test]
fn invalid_spec_exits_2_with_error_json() {
    let dir = temp_dir("invalid");
    let output = bin()
        .args(["spectrum", "--pants", "0,2,2", "--out"])
        .arg(&dir)
        .output()
        .expect("run binary");
    assert_eq!(output.status.code(), Some(2));
    let text = String::from_utf8(output.stdout).expect("utf8");
    let report: serde_json::Value = serde_json::from_str(&text).expect("error JSON parses");
    check_required_fields(&report, "error.schema.json");
    assert_eq!(report["code"], 2);
}

#[test]
fn spectrum_artifacts_and_determinism() {
    let dir1 = temp_dir("spec1");
    let dir2 = temp_dir("spec2");
    for dir in [&dir1, &dir2] {
        let output = bin()
            .args(["spectrum", "--pants", "2,2,2", "--cutoff", "6", "--out"])
            .arg(dir)
            .output()
            .expect("run binary");
        assert!(output.status.success(), "{output:?}");
    }
    let csv1 = fs::read(dir1.join("spectrum.csv")).expect("csv written");
    let csv2 = fs::read(dir2.join("spectrum.csv")).expect("csv written");
    assert_eq!(csv1, csv2, "spectrum CSV not byte-identical");
    let json1 = fs::read(dir1.join("spectrum.json")).expect("json written");
    let json2 = fs::read(dir2.join("spectrum.json")).expect("json written");
    assert_eq!(json1, json2, "spectrum JSON not byte-identical");

    let report: serde_json::Value =
        serde_json::from_slice(&json1).expect("spectrum JSON parses");
    check_required_fields(&report, "spectrum.schema.json");

    // Six seam records head the CSV of the symmetric pants.
    let text = String::from_utf8(csv1).expect("utf8");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("length,from,to,word"));
    for _ in 0..6 {
        let line = lines.next().expect("at least six records");
        let len: f64 = line.split(',').next().expect("length column").parse().expect("f64");
        assert!((len - 1.7049).abs() < 1e-3, "seam length head: {line}");
    }
}

#[test]
fn budget_exhaustion_exits_4_with_partial() {
    let dir = temp_dir("budget");
    let output = bin()
        .args([
            "spectrum", "--pants", "2,2,2", "--cutoff", "9", "--budget", "10", "--out",
        ])
        .arg(&dir)
        .output()
        .expect("run binary");
    assert_eq!(output.status.code(), Some(4));
    assert!(dir.join("spectrum.csv.partial").exists());
}

#[test]
fn arcs_writes_csv_and_json() {
    let dir = temp_dir("arcs");
    let output = bin()
        .args(["arcs", "--pants", "2,2,2", "--cutoff", "8", "--out"])
        .arg(&dir)
        .output()
        .expect("run binary");
    assert!(output.status.success(), "{output:?}");
    let csv = fs::read_to_string(dir.join("arcs.csv")).expect("csv written");
    assert!(csv.starts_with("length,from,to,word\n"));
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.join("arcs.json")).expect("json written"),
    )
    .expect("report parses");
    assert_eq!(report["basepoints"].as_array().map(|a| a.len()), Some(2));
    assert_eq!(
        report["record_count"].as_u64().expect("count") as usize,
        csv.lines().count() - 1
    );
}

#[test]
fn identities_report_conforms_to_schema() {
    let dir = temp_dir("ident");
    let output = bin()
        .args(["identities", "--pants", "2,2,2", "--cutoff", "8", "--out"])
        .arg(&dir)
        .output()
        .expect("run binary");
    assert!(output.status.success(), "{output:?}");
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.join("identities.json")).expect("report written"),
    )
    .expect("report parses");
    check_required_fields(&report, "identity-report.schema.json");
    let bas = report["basmajian_residuals"].as_array().expect("residuals");
    for pair in bas.windows(2) {
        assert!(
            pair[1].as_f64() <= pair[0].as_f64(),
            "basmajian residuals must decrease"
        );
    }
}

#[test]
fn eta_report_conforms_to_schema() {
    let dir = temp_dir("eta");
    let config_path = dir.join("run.json");
    // A deliberately small sweep keeps this test fast; the estimate's
    // quality gates are covered by the acceptance suite.
    fs::write(
        &config_path,
        r#"{
            "surface": {"kind": "pants", "boundary_lengths": [2.0, 2.0, 2.0]},
            "cutoff": 10.0,
            "continuation": {
                "term_counts": [2],
                "window_fractions": [0.5],
                "cutoff_count": 3,
                "cutoff_span": 0.2,
                "seed": 0
            }
        }"#,
    )
    .expect("write config");
    let output = bin()
        .args(["eta", "--config"])
        .arg(&config_path)
        .args(["--out"])
        .arg(&dir)
        .output()
        .expect("run binary");
    let code = output.status.code();
    assert!(
        code == Some(0) || code == Some(3),
        "eta must exit 0 or 3 (inconclusive), got {code:?}"
    );
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.join("eta.json")).expect("report written"),
    )
    .expect("report parses");
    check_required_fields(&report, "eta-report.schema.json");
    assert_eq!(report["kind"], "eta");
    assert_eq!(report["expected"], 0.0);
    assert!(dir.join("eta_fit.csv").exists());
}

#[test]
fn config_file_roundtrip() {
    let dir = temp_dir("config");
    let config_path = dir.join("run.json");
    fs::write(
        &config_path,
        r#"{"surface": {"kind": "pants", "boundary_lengths": [1.0, 2.0, 3.0]}, "cutoff": 5.0}"#,
    )
    .expect("write config");
    let output = bin()
        .args(["spectrum", "--config"])
        .arg(&config_path)
        .args(["--out"])
        .arg(&dir)
        .output()
        .expect("run binary");
    assert!(output.status.success(), "{output:?}");
    assert!(dir.join("spectrum.csv").exists());
}
