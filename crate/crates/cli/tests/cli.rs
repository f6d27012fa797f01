//! End-to-end checks of the `drinfeld-census` binary: output shapes, exit
//! codes, and determinism across worker counts.

use std::process::{Command, Output};

use census_core::CensusReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_drinfeld-census"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn irreducibles_listing() {
    let out = run(&["irreducibles", "--gf", "2", "--deg", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("2 monic irreducibles of degree 3 over gf(2)"));
    assert!(text.contains("T^3+T^2+1"));
    assert!(text.contains("T^3+T+1"));

    let out = run(&["irreducibles", "--gf", "3", "--deg", "1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "degree,poly\n1,T\n1,T+1\n1,T+2\n");
}

#[test]
fn census_csv_round_trips() {
    let out = run(&[
        "census", "--gf", "2", "--rank", "2", "--b", "1..3", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let report = CensusReport::from_csv(&text).expect("emitted CSV re-parses");
    assert_eq!(report.to_csv(), text);
    let counts: Vec<String> = report
        .rows
        .iter()
        .map(|r| r.exact_count.to_string())
        .collect();
    assert_eq!(counts, ["54", "840", "13440"]);
}

#[test]
fn census_json_round_trips() {
    let out = run(&[
        "census", "--gf", "2", "--rank", "2", "--b", "0..2", "--format", "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let report = CensusReport::from_json(&text).expect("emitted JSON re-parses");
    assert_eq!(format!("{:#}\n", report.to_json()), text);
}

#[test]
fn conditioned_census_density() {
    let out = run(&[
        "census", "--gf", "2", "--rank", "2", "--b", "3", "--cond", "good@T",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("density 8/15"));
}

#[test]
fn repeated_prime_is_rejected() {
    let out = run(&[
        "census", "--gf", "2", "--rank", "2", "--b", "2", "--cond", "bad@T", "--cond", "bad@T",
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("repeated prime"), "stderr: {err}");
}

#[test]
fn verify_examples_reports_the_failing_rows() {
    let out = run(&["verify-examples"]);
    assert_eq!(out.status.code(), Some(1), "two rows fail by design");
    let text = stdout(&out);
    assert_eq!(text.matches("PASS").count(), 5);
    assert_eq!(text.matches("FAIL").count(), 2);
    assert!(text.contains("published 48/49, computed 342/343"));
    assert!(text.contains("published 1/6, computed 8/45"));
}

#[test]
fn gon_check_pure_box_is_exact() {
    let out = run(&[
        "gon-check",
        "--gf", "2",
        "--box", r#"{"n":2,"bounds":[0,0],"congruences":[]}"#,
        "--weights", "1,1",
        "--t", "0..3",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        assert!(line.ends_with(",0"), "nonzero error in {line}");
    }
}

#[test]
fn enumerate_matches_census_count() {
    let out = run(&["enumerate", "--gf", "2", "--rank", "2", "--b", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("54 members at height 1"));
    assert_eq!(text.matches("phi_T = ").count(), 54);
}

#[test]
fn worker_count_does_not_change_output() {
    let args = [
        "census", "--gf", "2", "--rank", "2", "--b", "0..2", "--format", "csv",
    ];
    let baseline = stdout(&run(&args));
    for workers in ["1", "2", "8"] {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--workers", workers]);
        assert_eq!(stdout(&run(&full)), baseline, "workers = {workers}");
    }
}

#[test]
fn work_bound_is_enforced() {
    let out = bin()
        .args(["census", "--gf", "2", "--rank", "2", "--b", "0..1"])
        .env("DRINFELD_CENSUS_MAX_WORK", "5")
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("above the bound"), "stderr: {err}");
}
