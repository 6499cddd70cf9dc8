use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn rklearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rklearn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_code(out: &Output) -> String {
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(text.trim_end().lines().count(), 1, "{text}");
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    v["code"].as_str().unwrap().to_string()
}

fn prefix(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn list_prints_registry() {
    let out = rklearn(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("rk4") && l.contains("order 4")));
    assert!(text.contains("cheb2"));
}

#[test]
fn exit_codes() {
    let out = rklearn(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_code(&out), "usage");

    let out = rklearn(&["solve", "--method", "rk4", "--lambda", "1+2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = rklearn(&["solve", "--method", "rk5", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_code(&out), "unknown_method");

    let out = rklearn(&[
        "solve", "--method", "rk4", "--lambda", "1", "--policy", "index:9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_code(&out), "index_out_of_range");

    assert_eq!(rklearn(&["--help"]).status.code(), Some(0));
}

#[test]
fn solve_outputs() {
    let v = stdout_json(&rklearn(&[
        "solve",
        "--method",
        "explicit_euler",
        "--lambda",
        "0+3.14159265358979i",
        "--h",
        "1",
    ]));
    assert!((v["selected"][0].as_f64().unwrap() + 2.0).abs() < 1e-9);
    assert_eq!(v["roots"].as_array().unwrap().len(), 1);

    let v = stdout_json(&rklearn(&[
        "solve",
        "--method",
        "explicit_midpoint",
        "--lambda",
        "0",
    ]));
    assert!(v["coefficients"]["l_alpha"].is_null());
    assert_eq!(v["coefficients"]["reason"], "undefined");

    let v = stdout_json(&rklearn(&["solve", "--lambda", "-2-1i", "--policy", "all"]));
    assert_eq!(v["roots"].as_array().unwrap().len(), 4);
    assert!(v["selected"].is_null());
}

#[test]
fn solve_reads_tableau_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ralston.json");
    fs::write(
        &path,
        r#"{"name": "ralston", "A": [[0, 0], ["2/3", 0]], "b": ["1/4", "3/4"]}"#,
    )
    .unwrap();
    let v = stdout_json(&rklearn(&[
        "solve",
        "--tableau",
        path.to_str().unwrap(),
        "--lambda",
        "-1",
    ]));
    assert_eq!(v["method"], "ralston");
    assert_eq!(v["roots"].as_array().unwrap().len(), 2);

    fs::write(&path, r#"{"A": [[0]], "b": ["1/0"]}"#).unwrap();
    let out = rklearn(&[
        "solve",
        "--tableau",
        path.to_str().unwrap(),
        "--lambda",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_code(&out), "non_finite");
}

#[test]
fn analyze_writes_reproducible_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, policy: &str| {
        let p = prefix(dir.path(), name);
        stdout_json(&rklearn(&[
            "analyze",
            "--method",
            "explicit_midpoint",
            "--policy",
            policy,
            "--nx",
            "60",
            "--ny",
            "40",
            "--out",
            &p,
        ]));
        p
    };
    let a = run("a", "index:0");
    let b = run("b", "index:0");
    let c = run("c", "index:1");
    let read = |p: &str, ext: &str| fs::read(format!("{p}.{ext}")).unwrap();
    assert_eq!(read(&a, "csv"), read(&b, "csv"));
    assert_ne!(read(&a, "csv"), read(&c, "csv"));
    let csv = String::from_utf8(read(&a, "csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("re,im,value"));
    assert_eq!(csv.lines().count(), 1 + 60 * 40);
    assert!(String::from_utf8(read(&a, "svg")).unwrap().contains("<svg"));

    let manifest: Value = serde_json::from_slice(&read(&a, "manifest.json")).unwrap();
    assert_eq!(manifest["command"], "analyze");
    assert_eq!(manifest["config"]["region"]["nx"], 60);
    assert_eq!(manifest["config"]["levels"].as_array().unwrap().len(), 4);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 3);

    // replaying the recorded argv reproduces the CSV
    let argv: Vec<String> = manifest["argv"]
        .as_array()
        .unwrap()
        .iter()
        .skip(1)
        .map(|v| {
            v.as_str()
                .unwrap()
                .replace(&a, &prefix(dir.path(), "replay"))
        })
        .collect();
    let refs: Vec<&str> = argv.iter().map(String::as_str).collect();
    stdout_json(&rklearn(&refs));
    assert_eq!(read(&prefix(dir.path(), "replay"), "csv"), read(&a, "csv"));
}

#[test]
fn analyze_default_region_is_600_square() {
    let dir = tempfile::tempdir().unwrap();
    let p = prefix(&dir.path().join("nested/dir"), "euler");
    let v = stdout_json(&rklearn(&[
        "analyze",
        "--method",
        "explicit_euler",
        "--out",
        &p,
    ]));
    assert_eq!(v["nodes"], 360_000);
    let csv = fs::read_to_string(format!("{p}.csv")).unwrap();
    assert_eq!(csv.lines().count(), 360_001);
}

#[test]
fn analyze_rejects_bad_levels_and_regions() {
    let dir = tempfile::tempdir().unwrap();
    let p = prefix(dir.path(), "x");
    let out = rklearn(&[
        "analyze", "--nx", "10", "--ny", "10", "--levels", "1,0.1", "--out", &p,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_code(&out), "invalid_levels");
    let out = rklearn(&["analyze", "--re-min", "3", "--re-max", "1", "--out", &p]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_code(&out), "invalid_region");
}

#[test]
fn design_outputs() {
    let v = stdout_json(&rklearn(&["design", "--stages", "2"]));
    assert_eq!(v["stability_poly"], serde_json::json!(["1", "1", "1/8"]));
    assert_eq!(
        v["realized_tableau"]["b"],
        serde_json::json!(["3/4", "1/4"])
    );
    let v = stdout_json(&rklearn(&["design", "--stages", "1"]));
    assert_eq!(v["stability_poly"], serde_json::json!(["1", "1"]));
    assert!(v["realized_tableau"].is_null());
}

#[test]
fn linear_training_finds_euler_root() {
    let dir = tempfile::tempdir().unwrap();
    let p = prefix(dir.path(), "lin");
    let v = stdout_json(&rklearn(&[
        "train",
        "--model",
        "linear",
        "--method",
        "explicit_euler",
        "--lambda",
        "0+3.141592653589793i",
        "--n",
        "500",
        "--lr",
        "0.01",
        "--epochs",
        "5000",
        "--out",
        &p,
    ]));
    assert!((v["nearest_root"][0].as_f64().unwrap() + 2.0).abs() < 1e-9);
    assert!(v["distance"].as_f64().unwrap() < 1e-6);
    let csv = fs::read_to_string(format!("{p}.trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,re_true,re_learned"));

    let cmp = stdout_json(&rklearn(&[
        "compare",
        "--report",
        &format!("{p}.report.json"),
    ]));
    assert_eq!(cmp["matched_index"], 0);
    assert!((cmp["empirical"]["l_imag"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn mlp_smoke_is_fast_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = prefix(dir.path(), "a");
    let b = prefix(dir.path(), "b");
    let start = Instant::now();
    stdout_json(&rklearn(&[
        "train", "--preset", "smoke", "--seed", "3", "--out", &a,
    ]));
    assert!(start.elapsed() < Duration::from_secs(10));
    stdout_json(&rklearn(&[
        "train", "--preset", "smoke", "--seed", "3", "--out", &b,
    ]));
    for ext in ["report.json", "trajectory.csv", "comparison.json"] {
        assert_eq!(
            fs::read(format!("{a}.{ext}")).unwrap(),
            fs::read(format!("{b}.{ext}")).unwrap(),
            "{ext}"
        );
    }
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(format!("{a}.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["config"]["hidden"], 8);
    assert_eq!(manifest["config"]["n"], 100);
    assert_eq!(manifest["config"]["optimizer"]["epochs"], 50);
}

#[test]
fn implicit_training_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = rklearn(&[
        "train",
        "--method",
        "implicit_euler",
        "--preset",
        "smoke",
        "--out",
        &prefix(dir.path(), "x"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_code(&out), "unsupported");
}

#[test]
fn thread_override_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_rklearn"))
        .args(["list"])
        .env("RKLEARN_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_rklearn"))
        .args(["solve", "--lambda", "-1"])
        .env("RKLEARN_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}
