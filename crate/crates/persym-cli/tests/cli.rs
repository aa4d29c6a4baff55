//! End-to-end tests of the compiled `persym` binary: output shapes, exit
//! codes, reproducibility, and JSON round trips.

use std::process::{Command, Output};

use persym_cli::RunReport;
use serde_json::Value;

fn persym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persym"))
        .args(args)
        .output()
        .expect("binary should run to completion")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout parses as JSON")
}

/// Finds a named entry in the report's `results` array.
fn result_value<'a>(report: &'a Value, name: &str) -> &'a str {
    report["results"]
        .as_array()
        .expect("results array")
        .iter()
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("no result named {name}"))["value"]
        .as_str()
        .expect("values are decimal strings")
}

fn all_checks_pass(report: &Value) -> bool {
    report["checks"].as_array().expect("checks array").iter().all(|c| c["pass"] == true)
}

#[test]
fn census_json_reports_exact_counts_and_green_checks() {
    let out = persym(&["census", "--n", "1", "--k", "2"]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let report = json(&out);
    assert_eq!(report["command"], "census");
    assert_eq!(result_value(&report, "gamma_0"), "1");
    assert_eq!(result_value(&report, "gamma_1"), "3");
    assert_eq!(result_value(&report, "gamma_2"), "4");
    assert_eq!(result_value(&report, "total"), "8");
    assert!(report["checks"].as_array().unwrap().len() >= 2);
    assert!(all_checks_pass(&report));
}

#[test]
fn repeated_runs_are_byte_identical_apart_from_timing() {
    let args = ["census", "--n", "2", "--k", "3", "--threads", "2"];
    let first = persym(&args);
    let second = persym(&args);
    assert!(first.status.success() && second.status.success());

    let strip_timing = |out: &Output| -> String {
        stdout_str(out)
            .lines()
            .filter(|line| !line.trim_start().starts_with("\"elapsed_ms\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip_timing(&first), strip_timing(&second));
}

#[test]
fn worker_count_does_not_change_the_report_contents() {
    let single = json(&persym(&["census", "--n", "2", "--k", "3", "--threads", "1"]));
    let split = json(&persym(&["census", "--n", "2", "--k", "3", "--threads", "7"]));
    assert_eq!(single["workers"], 1);
    assert_eq!(split["workers"], 7);
    assert_eq!(single["results"], split["results"]);
    assert_eq!(single["checks"], split["checks"]);
}

#[test]
fn census_csv_has_the_documented_shape() {
    let out = persym(&["census", "--n", "5", "--k", "2", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "rank,count\n0,1\n1,93\n2,32674\n");
}

#[test]
fn oversized_sweep_is_refused_with_exit_code_2() {
    let out = persym(&["census", "--n", "5", "--k", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_str(&out).is_empty(), "refusal must not print a report");
    let err = stderr_str(&out);
    assert!(err.contains("guard"), "stderr should name the guard: {err}");
    assert!(err.contains("force"), "stderr should mention the override: {err}");
}

#[test]
fn force_flag_is_accepted_on_feasible_shapes() {
    // Genuinely guarded sweeps start at 2^41 points, far beyond any test
    // budget, so this only exercises flag plumbing on a small shape.
    let out = persym(&["census", "--n", "1", "--k", "2", "--force"]);
    assert!(out.status.success());
}

#[test]
fn unknown_flags_exit_with_code_2() {
    let out = persym(&["census", "--n", "1", "--k", "2", "--badflag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_csv_lists_every_check_with_shape_columns() {
    let out = persym(&["verify", "--n", "2", "--kmax", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check,n,k,pass,lhs,rhs"));
    assert!(text.contains("first-moment identity,2,1,true,"));
    assert!(text.contains("second-moment identity,2,4,true,"));
    for line in text.lines().skip(1) {
        assert!(line.split(',').count() >= 6, "short row: {line}");
    }
}

#[test]
fn formula_json_carries_the_value_and_cross_checks() {
    let out = persym(&["formula", "--n", "5", "--i", "3", "--k", "10"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(result_value(&report, "value"), "7030800");
    assert_eq!(result_value(&report, "valid"), "true");
    assert!(all_checks_pass(&report));
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"general evaluator agrees"), "checks were {names:?}");
}

#[test]
fn formula_rejects_a_rank_beyond_the_table() {
    let out = persym(&["formula", "--n", "5", "--i", "11", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).starts_with("error:"));
}

#[test]
fn polycount_json_closes_the_loop_against_the_census() {
    let out = persym(&["polycount", "--n", "1", "--k", "2", "--q", "2"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(result_value(&report, "solution_count"), "64");
    assert_eq!(result_value(&report, "census_prediction"), "64");
    assert!(all_checks_pass(&report));
}

#[test]
fn derive_json_lists_coefficients_notes_and_a_green_audit_trail() {
    let out = persym(&["derive"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["results"].as_array().unwrap().len(), 18);
    assert_eq!(result_value(&report, "a8"), "496");
    assert_eq!(result_value(&report, "a9"), "31248");
    assert_eq!(result_value(&report, "d6"), "-23976878080");
    assert_eq!(report["notes"].as_array().unwrap().len(), 3);
    assert!(all_checks_pass(&report));
}

#[test]
fn reports_round_trip_through_the_typed_reader() {
    for args in [
        vec!["census", "--n", "1", "--k", "3"],
        vec!["formula", "--n", "4", "--i", "2", "--k", "6"],
        vec!["derive"],
    ] {
        let out = persym(&args);
        assert!(out.status.success());
        let text = stdout_str(&out);
        let report: RunReport = serde_json::from_str(&text).expect("typed parse");
        let rendered = serde_json::to_string_pretty(&report).expect("re-serialize");
        assert_eq!(rendered, text.trim_end(), "round trip changed the bytes for {args:?}");
    }
}
