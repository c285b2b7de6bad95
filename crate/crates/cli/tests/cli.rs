use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interval34"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn verify_direct_defaults_to_csv() {
    let out = stdout(&["verify-direct", "--nmax", "2000", "--witnesses"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n_min,n_max,failures,witnesses,runtime_ms,n,witness"));
    // n = 1: the smallest prime in [3, 4] is 3
    assert!(out.lines().any(|l| l.ends_with(",1,3")), "{out}");
}

#[test]
fn verify_direct_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    assert_eq!(code(&["verify-direct", "--nmax", "5000", "--format", "json", "--out", p]), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["n_max"], 5000);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn thread_count_does_not_change_results() {
    let strip = |threads: &str| {
        let out = stdout(&["verify-direct", "--nmax", "30000", "--witnesses", "--threads", threads, "--format", "json"]);
        let mut v: serde_json::Value = serde_json::from_str(&out).unwrap();
        v.as_object_mut().unwrap().remove("runtime_ms");
        v
    };
    assert_eq!(strip("1"), strip("4"));
}

#[test]
fn verify_direct_capacity_exit() {
    assert_eq!(code(&["verify-direct", "--nmax", "3000000000"]), 3);
}

#[test]
fn corollary_passes() {
    assert_eq!(code(&["verify-corollary", "--nmax", "10000"]), 0);
}

#[test]
fn decompose_small_and_pole() {
    assert!(stdout(&["decompose", "--n", "2"]).contains("T1 = 2^2"));
    let out = stdout(&["decompose", "--n", "221"]);
    assert!(out.contains("pole: not applicable"), "{out}");
    assert_eq!(code(&["decompose", "--n", "0"]), 2);
}

#[test]
fn lower_bound_exits() {
    assert_eq!(code(&["lower-bound", "--n", "221"]), 2);
    let out = stdout(&["lower-bound", "--n", "200000", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["satisfied"], true);
}

#[test]
fn analytic_exits() {
    assert_eq!(code(&["verify-analytic", "--samples", "162754"]), 2);
    assert_eq!(code(&["verify-analytic", "--samples", "162755,1000000"]), 0);
}

#[test]
fn observations_exit_zero() {
    assert_eq!(code(&["observations", "--nmin", "1", "--nmax", "100"]), 0);
    assert_eq!(code(&["observations", "--nmin", "250", "--nmax", "400", "--format", "csv"]), 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&["bogus"]), 2);
    assert_eq!(code(&["decompose"]), 2);
    assert_eq!(code(&["verify-direct", "--format", "yaml"]), 2);
}
