use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const HALF_POLE: &str = r#"{"schema_version": "1", "n": 1,
    "A": [[[0, 0]]], "B": [[[1, 0]]], "poles": [{"lambda": 1, "C": [[[1, 0]]]}]}"#;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stieltjes-cf"));
    for var in ["TOL_PSD", "TOL_RANK", "SAMPLES", "SEED", "OUTPUT"] {
        cmd.env_remove(format!("STIELTJES_CF_{var}"));
    }
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn arg(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn csv_rows(out: &Output) -> Vec<Vec<f64>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn certify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", HALF_POLE);
    let out = run(&["certify", arg(&good)]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(report["command"], "certify");

    // f(0) = 0.5 - 1 < 0
    let negative = write(&dir, "negative.json", &HALF_POLE.replace(r#""B": [[[1, 0]]]"#, r#""B": [[[0.5, 0]]]"#));
    let out = run(&["certify", arg(&negative)]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["f(0) >= 0", "kernels"]);

    let malformed = write(&dir, "bad.json", &HALF_POLE.replace(r#""lambda": 1"#, r#""lambda": "one""#));
    let out = run(&["certify", arg(&malformed)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("poles[0].lambda"));

    assert_eq!(run(&["certify", "/nonexistent/f.json"]).status.code(), Some(2));
    assert_eq!(run(&["certify"]).status.code(), Some(2));
}

#[test]
fn expand_formats() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", HALF_POLE);

    let report = json(&run(&["expand", arg(&f)]));
    let levels = report["result"]["levels"].as_array().unwrap();
    let pairs: Vec<((f64, f64), (f64, f64))> =
        levels.iter().map(|l| (complex(&l["constant"][0][0]), complex(&l["linear"][0][0]))).collect();
    assert_eq!(pairs, [((0.0, 0.0), (1.0, 0.0)), ((1.0, 0.0), (1.0, 0.0))]);
    assert!(report["residuals"]["round_trip_max_relative_error"].as_f64().unwrap() < 1e-10);

    for format in ["classical", "sfraction"] {
        let out = run(&["expand", arg(&f), "--format", format]);
        assert_eq!(out.status.code(), Some(0), "{format}");
        assert!(json(&out)["residuals"]["round_trip_max_relative_error"].as_f64().unwrap() < 1e-10);
    }
    let report = json(&run(&["expand", arg(&f), "--format", "sfraction"]));
    assert_eq!(report["result"]["head"], serde_json::json!([0.0, 1.0]));
    assert_eq!(report["result"]["coefficients"], serde_json::json!([1.0, 1.0]));

    let affine = write(&dir, "affine.json", r#"{"schema_version": "1", "n": 1, "A": [[[2, 0]]], "B": [[[3, 0]]]}"#);
    let report = json(&run(&["expand", arg(&affine)]));
    assert_eq!(report["result"]["levels"].as_array().unwrap().len(), 1);

    let matrix = write(
        &dir,
        "matrix.json",
        r#"{"schema_version": "1", "n": 2,
            "A": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "B": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}"#,
    );
    assert_eq!(run(&["expand", arg(&matrix), "--format", "sfraction"]).status.code(), Some(2));
    assert_eq!(run(&["expand", arg(&matrix)]).status.code(), Some(0));
}

#[test]
fn reports_are_deterministic_and_flags_beat_environment() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", HALF_POLE);
    let first = run(&["certify", arg(&f), "--seed", "7", "--samples", "12"]);
    let second = run(&["certify", arg(&f), "--seed", "7", "--samples", "12"]);
    assert_eq!(first.stdout, second.stdout);

    let from_env = bin().args(["certify", arg(&f), "--samples", "12"]).env("STIELTJES_CF_SEED", "7").output().unwrap();
    assert_eq!(from_env.stdout, first.stdout);

    let overridden = bin()
        .args(["certify", arg(&f), "--seed", "7", "--samples", "12"])
        .env("STIELTJES_CF_SEED", "8")
        .env("STIELTJES_CF_TOL_PSD", "1e-6")
        .output()
        .unwrap();
    let report = json(&overridden);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["tolerances"]["psd"], 1e-6);

    let target = dir.path().join("report.json");
    let out = run(&["certify", arg(&f), "--seed", "7", "--samples", "12", "--output", arg(&target)]);
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read(&target).unwrap(), first.stdout);
}

#[test]
fn composite_golden_values() {
    let out = run(&["composite", "hs", "--dim", "2", "--c1", "0.5", "--sigma1", "0", "--sigma2", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("z_re,z_im,value_re,value_im\n"));
    let row = &csv_rows(&out)[0];
    assert!((row[2] - 1.0 / 3.0).abs() < 1e-12 && row[3] == 0.0);

    let out = run(&["composite", "hs", "--dim", "3", "--c1", "0.5", "--sigma1", "0"]);
    assert!((csv_rows(&out)[0][2] - 0.4).abs() < 1e-12);

    let out = run(&["composite", "keller", "--dim", "2", "--c1", "0.5", "--sigma1", "2", "--sigma2", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(csv_rows(&out)[0][2].abs() < 1e-12);

    // the interchange relation fails for spheres
    let out = run(&["composite", "keller", "--dim", "3", "--c1", "0.5", "--sigma1", "2"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["composite", "hs", "--c1", "1.5", "--sigma1", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn composite_grids_and_tensors() {
    let out = run(&["composite", "multicoat", "--fractions", "0.3,0.6", "--samples", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r[0] >= 0.0));

    let out = run(&["composite", "laminate", "--weights", "1", "--proportions", "0.5", "--sigma1", "2"]);
    assert!((csv_rows(&out)[0][2] - 4.0 / 3.0).abs() < 1e-12);
    let out = run(&[
        "composite",
        "laminate",
        "--weights",
        "1",
        "--proportions",
        "0.5",
        "--sigma1",
        "2",
        "--direction",
        "perpendicular",
    ]);
    assert!((csv_rows(&out)[0][2] - 1.5).abs() < 1e-12);
    let out = run(&["composite", "laminate", "--weights", "0.5", "--proportions", "0.5", "--sigma1", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["composite", "tartar", "--c1", "0.5", "--sigma1", "2", "--sigma2", "1"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("z_re,z_im,xx_re,xx_im,xy_re,xy_im,yx_re,yx_im,yy_re,yy_im\n"));
    let row = &csv_rows(&out)[0];
    assert!((row[2] - 1.4).abs() < 1e-12 && (row[8] - 1.4).abs() < 1e-12 && row[4].abs() < 1e-12);
    let out = run(&["composite", "tartar", "--c1", "0.5", "--sigma1", "2", "--m1", "1,0,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn composite_report_sidecar() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("keller.json");
    let out = run(&["composite", "keller", "--fractions", "0.2,0.7,0.4", "--report", arg(&report)]);
    assert_eq!(out.status.code(), Some(0));
    let value: Value = serde_json::from_slice(&fs::read(&report).unwrap()).unwrap();
    assert_eq!(value["command"], "composite keller");
    assert!(value["residuals"]["keller_max_normalized_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn synthesis_round_trips() {
    let dir = TempDir::new().unwrap();
    let doc = dir.path().join("multicoat.json");
    let out = run(&["composite", "multicoat", "--fractions", "0.3,0.6,0.45,0.2", "--emit-function", "-o", arg(&doc)]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["composite", "synthesize", arg(&doc), "--depth", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let fractions: Vec<f64> =
        json(&out)["result"]["fractions"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(fractions.len(), 4);
    for (a, b) in fractions.iter().zip([0.3, 0.6, 0.45, 0.2]) {
        assert!((a - b).abs() < 1e-8);
    }
    assert_eq!(run(&["composite", "synthesize", arg(&doc), "--depth", "3"]).status.code(), Some(1));

    // (z + z/(z+1)) / (3/2) is a two-layer laminate
    let laminate = write(
        &dir,
        "laminate.json",
        r#"{"schema_version": "1", "n": 1, "A": [[[0.6666666666666666, 0]]], "B": [[[0.6666666666666666, 0]]],
            "poles": [{"lambda": 1, "C": [[[0.6666666666666666, 0]]]}]}"#,
    );
    let out = run(&["composite", "synthesize", arg(&laminate), "--kind", "laminate"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["weights"].as_array().unwrap().len(), 2);

    let unnormalized = write(&dir, "half.json", HALF_POLE);
    assert_eq!(run(&["composite", "synthesize", arg(&unnormalized), "--kind", "laminate"]).status.code(), Some(1));
}
