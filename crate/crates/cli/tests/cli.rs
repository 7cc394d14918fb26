use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn uniquant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uniquant")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn quantize_two_dirac() {
    let v = json_of(&uniquant(&["quantize", "--gen", "twodirac:gap=1", "--n", "2", "--exact"]));
    assert_eq!(v["centers"], serde_json::json!([[0.0], [-0.5]]));
    assert_eq!(v["certificates"]["coupling_bound"], 1.5);
    assert_eq!(v["measured"], 0.75);
}

#[test]
fn quantize_with_truncation() {
    let v =
        json_of(&uniquant(&["quantize", "--gen", "sample:dist=pareto,q=2,N=500", "--n", "16", "--q", "1.5"]));
    let t = &v["truncation"];
    assert!(t["certificate"].as_f64().unwrap() > 0.0);
    assert_eq!(
        t["certificate"].as_f64().unwrap(),
        t["tail_bound"].as_f64().unwrap() + t["quantization_bound"].as_f64().unwrap()
    );
}

#[test]
fn decompose_from_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.csv", "x0,w\n-1,0.25\n-0.5,0.25\n0.5,0.25\n1,0.25\n");
    let v = json_of(&uniquant(&["decompose", "--input", &input, "--n", "2"]));
    assert_eq!(v["n"], 2);
    assert_eq!(v["r"], 1.0);
    let pieces = v["pieces"].as_array().unwrap();
    assert_eq!(pieces.len(), 2);
    for piece in pieces {
        let mass: f64 = piece["atoms"].as_array().unwrap().iter().map(|a| a["w"].as_f64().unwrap()).sum();
        assert!((mass - 0.5).abs() < 1e-12);
    }

    let csv = uniquant(&["decompose", "--input", &input, "--n", "2", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("k,x0,w"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn normalize_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.json", r#"{"dim":1,"atoms":[{"x":[0],"w":2},{"x":[1],"w":2}]}"#);
    let out = uniquant(&["quantize", "--input", &input, "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    json_of(&uniquant(&["quantize", "--input", &input, "--n", "2", "--normalize"]));
}

#[test]
fn classify_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.csv", "x0,w\n-1,1\n-0.9,1\n0.9,1\n1,1\n");
    let v = json_of(&uniquant(&["classify", "--input", &input, "--n", "2"]));
    assert_eq!(v["classes"], serde_json::json!([[2, 3], [0, 1]]));
    assert!((v["cost"].as_f64().unwrap() - 0.7).abs() < 1e-12);

    let csv = uniquant(&["classify", "--input", &input, "--n", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "index,class\n0,2\n1,2\n2,1\n3,1\n");

    let uneven = write(dir.path(), "q.csv", "x0,w\n0,1\n1,2\n");
    assert_eq!(uniquant(&["classify", "--input", &uneven, "--n", "1"]).status.code(), Some(2));
    assert_eq!(uniquant(&["classify", "--input", &input, "--n", "3"]).status.code(), Some(2));
}

#[test]
fn wasserstein_between_generators() {
    let v = json_of(&uniquant(&[
        "wasserstein",
        "--gen",
        "twodirac:gap=1",
        "--target-gen",
        "twodirac:gap=1",
        "--p",
        "2",
    ]));
    assert_eq!(v["value"], 0.0);
    let v = json_of(&uniquant(&["wasserstein", "--gen", "twodirac:gap=1", "--target-gen", "grid:d=1,m=1"]));
    assert_eq!(v["value"], 1.0);
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);
}

#[test]
fn rate_curve_csv_and_json() {
    let csv = uniquant(&["rate-curve", "--gen", "grid:d=1,m=40", "--n", "2,4,8", "--format", "csv"]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,measured,coupling_bound,closed_form_bound,random_baseline,oracle_optimal");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,") && lines[1].ends_with(",,"));

    let v = json_of(&uniquant(&["rate-curve", "--gen", "grid:d=1,m=40", "--n", "5"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert!(v["measured_slope"].is_null());
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.csv");
    let status = uniquant(&[
        "quantize",
        "--gen",
        "grid:d=2,m=4",
        "--n",
        "3",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success() && status.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("x0,x1,w\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["quantize", "--gen", "grid:d=2", "--n", "3"][..],
        &["quantize", "--gen", "nope:a=1", "--n", "3"],
        &["quantize", "--gen", "twodirac:gap=1", "--n", "3", "--p", "0.5"],
        &["quantize", "--gen", "twodirac:gap=1", "--n", "3", "--q", "0.5"],
        &["quantize", "--input", "/nonexistent/m.csv", "--n", "3"],
        &["quantize", "--input", "m.txt", "--n", "3"],
        &["rate-curve", "--gen", "twodirac:gap=1", "--n", "9..3"],
        &["decompose", "--gen", "twodirac:gap=1"],
        &["decompose", "--gen", "twodirac:gap=1", "--input", "m.csv", "--n", "2"],
    ] {
        assert_eq!(uniquant(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numerical_failures_exit_three() {
    let out = uniquant(&["rate-curve", "--gen", "grid:d=3,m=3", "--n", "40", "--oracle", "0.001"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
