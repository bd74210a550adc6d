use std::path::Path;
use std::process::{Command, Output};

fn slicequat(args: &[&str]) -> Output {
    slicequat_env(args, None)
}

fn slicequat_env(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_slicequat"));
    cmd.args(args).env_remove("SLICEQUAT_SEED");
    if let Some(s) = seed {
        cmd.env("SLICEQUAT_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn classify_examples() {
    let o = slicequat(&["classify", "--p", "2", "--beta", "0.5", "--lambda", "0,0,1,0", "--alpha", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["case"], "B");

    let o = slicequat(&["classify", "--p", "1", "--alpha", "0.5", "--beta", "0.5", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["case"], "A1");

    let o = slicequat(&["classify", "--p", "2", "--alpha", "0.25", "--beta", "0,0.5,0,0", "--lambda", "0,0,1,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["case"], "Invalid");
    assert_eq!(json(&o)["valid"], false);
}

#[test]
fn negative_components_parse() {
    let o = slicequat(&["classify", "--p", "1", "--alpha", "0,0.5,0,0", "--beta", "-0,-0.5,0,0", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["case"], "A22");
    let o = slicequat(&["classify", "--alpha", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn autdim_examples() {
    let o = slicequat(&["autdim"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!((r["case"].as_str(), r["nullity"].as_u64()), (Some("B"), Some(5)));
    assert_eq!(r["method"], "linearized");

    let o = slicequat(&["autdim", "--p", "1", "--alpha", "0.5", "--beta", "0.5", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["nullity"], 16);
    assert_eq!(json(&o)["method"], "direct");

    let o = slicequat(&["autdim", "--method", "direct"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonlinear system"));

    let o = slicequat(&["autdim", "--beta", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_output_is_byte_identical() {
    let a = slicequat(&["autdim", "--seed", "3"]);
    let b = slicequat(&["autdim", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert!(s.contains("\"seed\": 3"));
    // keys sorted, floats with 17 significant digits
    assert!(s.find("\"case\"").unwrap() < s.find("\"degree\"").unwrap());
    assert!(s.contains("5.0000000000000000e-1"));
}

#[test]
fn seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let seed_of = |o: &Output| json(o)["seed"].as_u64().unwrap();
    assert_eq!(seed_of(&slicequat(&["autdim"])), 42);
    assert_eq!(seed_of(&slicequat_env(&["autdim"], Some("7"))), 7);
    let cfg = write(dir.path(), "c.json", r#"{"seed": 5}"#);
    assert_eq!(seed_of(&slicequat_env(&["autdim", "--config", &cfg], Some("7"))), 5);
    assert_eq!(seed_of(&slicequat_env(&["autdim", "--config", &cfg, "--seed", "9"], Some("7"))), 9);
    assert_eq!(slicequat_env(&["autdim"], Some("x")).status.code(), Some(2));
}

#[test]
fn config_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"params": {"p": 1, "alpha": [0.5, 0, 0, 0], "beta": [0.5, 0, 0, 0], "lambda": [0, 0, 0, 0]}}"#,
    );
    let o = slicequat(&["classify", "--config", &cfg]);
    assert_eq!(json(&o)["case"], "A1");
    let o = slicequat(&["classify", "--config", &cfg, "--lambda", "0,0,1,0"]);
    assert_eq!(json(&o)["case"], "A3");
    let bad = write(dir.path(), "bad.json", r#"{"sede": 1}"#);
    assert_eq!(slicequat(&["classify", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn verify_with_injected_grid() {
    let dir = tempfile::tempdir().unwrap();
    let row = |expected: u32| {
        format!(
            r#"[{{"name": "B", "params": {{"p": 2, "alpha": [0.25,0,0,0], "beta": [0.5,0,0,0], "lambda": [0,0,1,0]}}, "expected": [{expected}]}}]"#
        )
    };
    let good = write(dir.path(), "good.json", &row(5));
    let o = slicequat(&["verify-theorems", "--grid", &good]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["passed"], 1);

    let wrong = write(dir.path(), "wrong.json", &row(7));
    let o = slicequat(&["verify-theorems", "--grid", &wrong]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["failed"], 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn verify_default_grid_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let o = slicequat(&["verify-theorems", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    assert!(csv.starts_with("name,case,alpha,beta,lambda,p,nullity,expected,pass\n"));
    let failing: Vec<&str> = rows
        .iter()
        .filter(|r| r.ends_with(",false"))
        .map(|r| r.split(',').next().unwrap())
        .collect();
    // the real-resonant and equal-real-part rows exceed the tabulated dimension
    assert_eq!(failing, ["A21 both real", "A22 non-conjugate"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn scan_family_examples() {
    let o = slicequat(&["scan-family", "--kind", "a1-to-a3", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let dims: Vec<u64> = r["rows"].as_array().unwrap().iter().map(|x| x["nullity"].as_u64().unwrap()).collect();
    assert_eq!(dims, [16, 8]);
    assert_eq!(r["jump"], true);

    let o = slicequat(&["scan-family", "--format", "csv"]);
    let csv = stdout(&o);
    assert!(csv.starts_with("lambda,case,nullity,expected,pass,slice_regular_family\n"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains(",A21,"));
    assert!(lines[2].starts_with("\"0,0,1,0\",B,5,5,true,true"));

    let o = slicequat(&["scan-family", "--kind", "a21-to-b", "--lambda", "0", "--lambda", "0,1,0,1"]);
    let r = json(&o);
    assert_eq!(r["rows"][1]["nullity"], 5);
}

#[test]
fn scan_family_rejects_empty_lambda_list() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"lambdas": []}"#);
    assert_eq!(slicequat(&["scan-family", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn orbit_search() {
    let args = ["orbit", "--p", "1", "--alpha", "0.25", "--beta", "0.5", "--lambda", "0"];
    let o = slicequat(&[&args[..], &["--z1", "1", "--w1", "0,1,0,0", "--z2", "0.0625", "--w2", "0,0.25,0,0"]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["k"], 2);
    let o = slicequat(&[&args[..], &["--z1", "1", "--w1", "0,1,0,0", "--z2", "1", "--w2", "0,1.1,0,0"]].concat());
    assert!(json(&o)["k"].is_null());
    let o = slicequat(&[&args[..], &["--z1", "0", "--w1", "0", "--z2", "1", "--w2", "1"]].concat());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stem_check_passes() {
    let o = slicequat(&["stem-check", "--count", "4", "--points", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["stems"].as_array().unwrap().len(), 4);
    assert!(r["control"]["dbar"].as_f64().unwrap() > 1e-2);
}
