//! End-to-end tests of the command-line interface: determinism, file
//! round-trips, exit codes, and the report formats.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pentagram"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn random_is_deterministic_per_seed() {
    let a = run(&["random", "--n", "7", "--seed", "5", "--kind", "ab"]);
    let b = run(&["random", "--n", "7", "--seed", "5", "--kind", "ab"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "same seed must be byte-identical");
    let c = run(&["random", "--n", "7", "--seed", "6", "--kind", "ab"]);
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn file_roundtrip_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let out = run(&["random", "--n", "8", "--seed", "2", "--kind", "vertices", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed = pentagram::files::PolygonFile::from_json(&text).unwrap();
    assert_eq!(parsed.to_json() + "\n", text);
}

#[test]
fn verify_passes_on_generated_polygon() {
    let out = run(&["verify", "--n", "7", "--seed", "1", "--steps", "20"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    assert!(report["checks"]["zero_curvature_ab"]["pass"].as_bool().unwrap());
}

#[test]
fn verify_reports_tampered_file_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let good = run(&["random", "--n", "7", "--seed", "3", "--kind", "ab", "--out", path.to_str().unwrap()]);
    assert!(good.status.success());
    // zero one coordinate
    let mut file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    file["data"]["a"][2] = serde_json::json!([0.0, 0.0]);
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let out = run(&["verify", "--file", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(3), "zeroed coordinate is a degeneracy");
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["checks"]["input_validity"]["pass"], serde_json::Value::Bool(false));
}

#[test]
fn closed_quadrilateral_is_rejected() {
    let out = run(&["random", "--n", "4", "--closed", "--kind", "vertices"]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["random", "--n", "6", "--kind", "ab"]);
    // n divisible by 3 with kind ab is degeneracy of the request
    assert!(!out.status.success());
    let out = run(&["verify", "--tol-override", "nonsense=1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["iterate"]);
    assert_eq!(out.status.code(), Some(2), "missing required --file");
}

#[test]
fn closed_pentagon_periodicity_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.json");
    assert!(run(&["random", "--n", "5", "--seed", "3", "--closed", "--kind", "vertices", "--out", path.to_str().unwrap()])
        .status
        .success());
    let out = run(&["iterate", "--file", path.to_str().unwrap(), "--steps", "5"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let periodicity = &report["details"]["periodicity"];
    assert!(periodicity.is_object(), "periodicity should be detected: {periodicity}");
    assert_eq!(periodicity["period"], serde_json::json!(1));
    // iterate with steps=0 still reports the initial invariants
    let out0 = run(&["iterate", "--file", path.to_str().unwrap(), "--steps", "0"]);
    assert!(out0.status.success());
    let rep0: serde_json::Value = serde_json::from_str(&stdout(&out0)).unwrap();
    assert!(rep0["details"]["initial_invariants"].is_object());
}

#[test]
fn svg_output_renders() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c6.json");
    let svg_path = dir.path().join("orbit.svg");
    assert!(run(&["random", "--n", "6", "--seed", "1", "--closed", "--kind", "vertices", "--out", path.to_str().unwrap()])
        .status
        .success());
    let out = run(&[
        "iterate",
        "--file",
        path.to_str().unwrap(),
        "--steps",
        "4",
        "--format",
        "svg",
        "--out",
        svg_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("viewBox=\"0 0 1000 1000\""));
    assert_eq!(svg.matches("<polyline").count(), 5);
}

#[test]
fn curve_reports_genus_for_closed_polygons() {
    let dir = tempfile::tempdir().unwrap();
    for (n, expected) in [(7usize, 3u64), (6, 1)] {
        let path = dir.path().join(format!("c{n}.json"));
        assert!(run(&["random", "--n", &n.to_string(), "--seed", "2", "--closed", "--kind", "vertices", "--out", path.to_str().unwrap()])
            .status
            .success());
        let out = run(&["curve", "--file", path.to_str().unwrap()]);
        assert!(out.status.success());
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["details"]["genus"], serde_json::json!(expected), "n = {n}");
        assert_eq!(report["details"]["closed"], serde_json::Value::Bool(true));
    }
}

#[test]
fn curve_reports_genus_for_twisted_polygons() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t5.json");
    assert!(run(&["random", "--n", "5", "--seed", "4", "--kind", "ab", "--out", path.to_str().unwrap()])
        .status
        .success());
    let out = run(&["curve", "--file", path.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["details"]["genus"], serde_json::json!(4));
}

#[test]
fn closed_subcommand_runs_pentagon_experiment() {
    let out = run(&["closed", "--n", "5", "--seed", "7"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for check in ["is_closed", "closed_relations", "triple_point_R", "pentagon_period_five", "genus"] {
        assert!(
            report["checks"][check]["pass"].as_bool().unwrap_or(false),
            "check {check} failed: {}",
            report["checks"][check]
        );
    }
}

#[test]
fn tolerance_override_applies() {
    // an absurdly tight bound must fail the otherwise-passing check
    let out = run(&[
        "verify",
        "--n",
        "7",
        "--seed",
        "1",
        "--steps",
        "5",
        "--tol-override",
        "zero_curvature=1e-18",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["checks"]["zero_curvature_ab"]["pass"], serde_json::Value::Bool(false));
    assert_eq!(report["checks"]["zero_curvature_ab"]["tolerance"], serde_json::json!(1e-18));
}

#[test]
fn report_determinism_modulo_timing() {
    let normalize = |s: &str| -> serde_json::Value {
        let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
        v["timing_ms"] = serde_json::json!(0);
        v
    };
    let a = run(&["verify", "--n", "5", "--seed", "9", "--steps", "10"]);
    let b = run(&["verify", "--n", "5", "--seed", "9", "--steps", "10"]);
    assert_eq!(normalize(&stdout(&a)), normalize(&stdout(&b)));
}

#[test]
fn missing_file_is_reported() {
    let out = run(&["invariants", "--file", Path::new("/nonexistent/x.json").to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn sweep_aggregates_all_sizes() {
    let out = run(&["verify", "--sweep", "--steps", "5"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    // every n in 4..=9 contributes checks for every seed
    for n in 4..=9 {
        for seed in 0..5 {
            let key = format!("n{n}_s{seed}_conservation");
            assert!(report["checks"][&key].is_object(), "missing {key}");
        }
    }
}
