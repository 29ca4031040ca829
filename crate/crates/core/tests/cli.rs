use std::process::{Command, Output};

use serde_json::Value;

fn fueterlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fueterlab"))
        .args(args)
        .output()
        .expect("failed to launch fueterlab")
}

fn report(out: &Output) -> Value {
    let doc: Value = serde_json::from_slice(&out.stdout).expect("stdout is not JSON");
    assert!(doc["timestamp"].is_string());
    doc["report"].clone()
}

const SMALL_GRID: &str = "-1,1,0.5,1.5,-2.5,2.5,0.4,2.74,4";

fn verdicts(spec: &str) -> (String, String, String, String) {
    let out = fueterlab(&["classify", spec, "--grid", SMALL_GRID]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    let v = |k: &str| r[k]["verdict"].as_str().unwrap().to_string();
    (v("class_I"), v("class_II"), v("class_III"), v("regular"))
}

#[test]
fn classify_examples() {
    assert_eq!(
        verdicts("rho"),
        ("pass".into(), "pass".into(), "fail".into(), "fail".into())
    );
    assert_eq!(
        verdicts("pow:2"),
        ("pass".into(), "pass".into(), "pass".into(), "fail".into())
    );
    let (i, ii, _, _) = verdicts("x-over-r-iota");
    assert_eq!((i.as_str(), ii.as_str()), ("pass", "fail"));
    assert_eq!(verdicts("L:pow:3").3, "pass");
}

#[test]
fn classify_is_deterministic_apart_from_timestamp() {
    let a = fueterlab(&["classify", "product:rho*pow:2", "--grid", SMALL_GRID]);
    let b = fueterlab(&["classify", "product:rho*pow:2", "--grid", SMALL_GRID]);
    let strip = |o: &Output| {
        String::from_utf8_lossy(&o.stdout)
            .lines()
            .filter(|l| !l.contains("\"timestamp\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn thread_cap_does_not_change_reports() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_fueterlab"))
            .args(["classify", "sigma", "--grid", SMALL_GRID])
            .env("FUETERLAB_THREADS", threads)
            .output()
            .unwrap();
        report(&out)
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn usage_errors() {
    assert_eq!(fueterlab(&["classify", "nope"]).status.code(), Some(2));
    assert_eq!(
        fueterlab(&["classify", "rho", "--scheme", "euler"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fueterlab(&["classify", "rho", "--grid", "1,2,3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fueterlab(&["classify", "chiral:x-over-r-iota", "--grid", SMALL_GRID])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fueterlab(&["laurent", "pow:2", "--center", "0,0.5", "--radii", "0.2,0.6"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(fueterlab(&[]).status.code(), Some(2));
}

fn coefficient(series: &Value, n: i64, a: usize, b: usize) -> (f64, f64) {
    let n_min = series["n_range"][0].as_i64().unwrap();
    let c = &series["coefficients"][(n - n_min) as usize][a][b];
    (c[0].as_f64().unwrap(), c[1].as_f64().unwrap())
}

fn close(got: (f64, f64), want: (f64, f64)) -> bool {
    (got.0 - want.0).abs() < 1e-9 && (got.1 - want.1).abs() < 1e-9
}

#[test]
fn laurent_examples() {
    let out = fueterlab(&["laurent", "pow:2", "--center", "0,1", "--radii", "0.2,0.6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let s = &r["series"];
    assert!(close(coefficient(s, 0, 4, 4), (-1.0, 0.0)));
    assert!(close(coefficient(s, 1, 0, 8), (0.0, 2.0)));
    assert!(close(coefficient(s, 2, 8, 0), (1.0, 0.0)));
    assert!(close(coefficient(s, -1, 3, 3), (0.0, 0.0)));
    assert!(r["probe_max_error"].as_f64().unwrap() < 1e-8);

    let out = fueterlab(&[
        "laurent",
        "identity",
        "--center",
        "1,2",
        "--radii",
        "0.5,1.0",
        "--n-range",
        "-2,2",
    ]);
    let s = report(&out)["series"].clone();
    assert!(close(coefficient(&s, 0, 2, 6), (1.0, 2.0)));
    assert!(close(coefficient(&s, 1, 2, 6), (1.0, 0.0)));
}

#[test]
fn laurent_check_class_on_rho() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.json");
    let out = fueterlab(&[
        "laurent",
        "rho",
        "--center",
        "0,1",
        "--radii",
        "0.2,0.6",
        "--check-class",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let classes = doc["report"]["coefficient_classes"].as_array().unwrap();
    assert_eq!(classes.len(), 17);
    assert!(classes.iter().all(|c| c["passed"] == Value::Bool(true)));
}

#[test]
fn verify_props_passes_by_default() {
    let out = fueterlab(&["verify-props"]);
    let r = report(&out);
    assert_eq!(out.status.code(), Some(0), "{r:#}");
    assert_eq!(r["all_passed"], Value::Bool(true));
    assert_eq!(r["total"].as_u64(), Some(16));
}

#[test]
fn verify_props_degrades_gracefully_with_a_coarse_step() {
    let out = fueterlab(&["verify-props", "--h", "1e-2"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 16);
    let order = checks
        .iter()
        .find(|c| c["name"] == "convergence-order")
        .unwrap();
    assert_eq!(order["passed"], Value::Bool(true));
}
