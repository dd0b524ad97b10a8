//! Black-box tests of the installed binary: output determinism, format
//! parity, the JSON input contracts, and the exit-code taxonomy.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entangling-ops"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_temp(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("temp file writes");
    path.to_str().expect("utf-8 path").to_string()
}

fn identity_channel_json() -> String {
    let mut rows = Vec::new();
    for r in 0..4 {
        let row: Vec<[f64; 2]> = (0..4)
            .map(|c| if r == c { [1.0, 0.0] } else { [0.0, 0.0] })
            .collect();
        rows.push(row);
    }
    json!({ "d": 2, "trace_flag": "trace-preserving", "kraus": [rows] }).to_string()
}

fn xx_hamiltonian_json() -> String {
    let mut rows = Vec::new();
    for r in 0..4 {
        let row: Vec<[f64; 2]> = (0..4)
            .map(|c| if r + c == 3 { [1.0, 0.0] } else { [0.0, 0.0] })
            .collect();
        rows.push(row);
    }
    json!({ "dims": [2, 2], "matrix": rows }).to_string()
}

#[test]
fn constants_are_byte_identical_across_invocations() {
    let a = run(&["constants"]);
    let b = run(&["constants"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert!((v["f_infinity"].as_f64().unwrap() - 5.97932).abs() < 1e-4);
    assert!((v["ratio"].as_f64().unwrap() - 3.1268).abs() < 1e-3);
}

#[test]
fn csv_format_carries_identical_numbers() {
    let json_out = stdout_json(&run(&["constants"]));
    let csv = run(&["constants", "--format", "csv"]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    // The CSV scalar must be the same serialized token JSON printed.
    let expected = format!("f_infinity,{}", json_out["f_infinity"]);
    assert!(
        text.lines().any(|l| l == expected),
        "no row {expected:?} in:\n{text}"
    );
    let nested = format!("f_table.1.f_n,{}", json_out["f_table"][1]["f_n"]);
    assert!(text.lines().any(|l| l == nested), "no row {nested:?}");
}

#[test]
fn output_flag_writes_the_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cost.json");
    let out = run(&[
        "expected-cost",
        "--n",
        "4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["n"], 4);
    let alpha = std::f64::consts::PI / 16.0;
    let product = v["alpha"].as_f64().unwrap() * v["f_n"].as_f64().unwrap();
    assert!((v["alpha"].as_f64().unwrap() - alpha).abs() < 1e-11);
    assert!((v["expected_ebits"].as_f64().unwrap() - product).abs() < 1e-9);
}

#[test]
fn analyze_channel_reports_the_verdict_and_choi() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(dir.path(), "identity.json", &identity_channel_json());
    let v = stdout_json(&run(&["analyze-channel", "--input", &input]));
    assert_eq!(v["d"], 2);
    assert_eq!(v["trace_flag"], "trace-preserving");
    assert_eq!(v["classification"], "separable-by-construction");
    assert_eq!(v["rank"], 1);
    assert_eq!(v["is_unitary"], true);
    assert!(v["ppt_min_eigenvalue"].as_f64().unwrap() >= -1e-9);
    assert_eq!(v["choi"]["dims"], json!([2, 2, 2, 2]));
    // Trace-one positive operator: the diagonal sums to 1.
    let diag: f64 = (0..16)
        .map(|i| v["choi"]["matrix"][i][i][0].as_f64().unwrap())
        .sum();
    assert!((diag - 1.0).abs() < 1e-10);
}

#[test]
fn simulate_depends_on_seed_but_not_on_invocation() {
    let args = ["simulate", "--n", "3", "--trials", "500", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let other = run(&["simulate", "--n", "3", "--trials", "500", "--seed", "12"]);
    assert_ne!(a.stdout, other.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["trials"], 500);
    assert!(v["min_fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
}

#[test]
fn decompose_reports_axis_weights_and_cost() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(dir.path(), "xx.json", &xx_hamiltonian_json());
    let v = stdout_json(&run(&["decompose", "--input", &input, "--t", "0.5"]));
    // sigma_x (x) sigma_x: one unit interaction axis, no local parts.
    let mu: Vec<f64> = (0..3)
        .map(|k| v["canonical"]["mu"][k].as_f64().unwrap())
        .collect();
    assert!((mu[0] - 1.0).abs() < 1e-10);
    assert!(mu[1].abs() < 1e-10 && mu[2].abs() < 1e-10);
    for k in 0..3 {
        assert!(v["pauli"]["local_a"][k].as_f64().unwrap().abs() < 1e-12);
        assert!(v["pauli"]["local_b"][k].as_f64().unwrap().abs() < 1e-12);
    }
    assert_eq!(v["t"], 0.5);
    let f_inf = 5.979313;
    assert!((v["gate_cost"].as_f64().unwrap() - 0.5 * f_inf).abs() < 1e-4);
}

#[test]
fn approx_phase_expands_into_dyadic_terms() {
    let v = stdout_json(&run(&["approx-phase", "--alpha", "0.3", "--eps", "1e-6"]));
    let phases: Vec<f64> = v["phases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let total: f64 = phases.iter().sum();
    assert!((total - 0.3).abs() <= 1e-6 + 1e-12);
    assert!(v["residual"].as_f64().unwrap() <= 1e-6);
    for (p, e) in phases.iter().zip(v["exponents"].as_array().unwrap()) {
        let n = e.as_u64().unwrap();
        assert!(n >= 2);
        assert!((p - std::f64::consts::PI / 2f64.powi(n as i32)).abs() < 1e-12);
    }
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["simulate", "--n"]);
    assert_eq!(out.status.code(), Some(2));
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn unreadable_or_unparsable_input_exits_three() {
    let out = run(&["analyze-channel", "--input", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(dir.path(), "broken.json", "{ not json at all");
    let out = run(&["analyze-channel", "--input", &input]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn structurally_invalid_input_exits_four() {
    // Parses fine, but the lone Kraus operator halves the trace while the
    // header claims trace preservation.
    let mut rows = Vec::new();
    for r in 0..4 {
        let row: Vec<[f64; 2]> = (0..4)
            .map(|c| if r == c { [0.5, 0.0] } else { [0.0, 0.0] })
            .collect();
        rows.push(row);
    }
    let wire = json!({ "d": 2, "trace_flag": "trace-preserving", "kraus": [rows] }).to_string();
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(dir.path(), "lossy.json", &wire);
    let out = run(&["analyze-channel", "--input", &input]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn numeric_domain_violations_exit_five() {
    let out = run(&["approx-phase", "--alpha", "3.0"]);
    assert_eq!(out.status.code(), Some(5));
    // A non-Hermitian "Hamiltonian" is a domain error, not a shape error.
    let wire = json!({
        "dims": [2, 2],
        "matrix": [
            [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
            [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
            [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
            [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
        ]
    })
    .to_string();
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(dir.path(), "raising.json", &wire);
    let out = run(&["decompose", "--input", &input]);
    assert_eq!(out.status.code(), Some(5));
}
