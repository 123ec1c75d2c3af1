use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde::Serialize;
use wqbern::cli::{GfOutput, NumberRecord, PadicProfileRecord, PolyRecord, VerifyOutput};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wqbern"))
        .args(args)
        .env_remove("WQBERN_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn assert_round_trip<T: Serialize + DeserializeOwned>(text: &str) -> T {
    let parsed: T = serde_json::from_str(text).unwrap();
    let mut again = serde_json::to_string_pretty(&parsed).unwrap();
    again.push('\n');
    assert_eq!(again, text);
    parsed
}

#[test]
fn numbers_json() {
    let o = run(&["numbers", "--n", "0..4", "--alpha", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let records: Vec<NumberRecord> = assert_round_trip(&stdout(&o));
    assert_eq!(records.len(), 5);
    assert_eq!(records[2].denominator, "1 + 2q + 2q^2 + q^3");
    assert_eq!(records[2].numerator, "q");
    assert_eq!(records[4].value_at_1.to_string(), "-1/30");
}

#[test]
fn numbers_csv_classical_column() {
    let o = run(&["numbers", "--n", "2", "--alpha", "1,2", "--format", "csv"]);
    let text = stdout(&o);
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("n,alpha,value,value_at_1"));
    let last: Vec<&str> = rows.map(|r| r.rsplit(',').next().unwrap()).collect();
    assert_eq!(last, vec!["1/6", "1/6"]);
}

#[test]
fn numbers_trivial_index() {
    let o = run(&["numbers", "--n", "0", "--alpha", "7", "--format", "json"]);
    let records: Vec<NumberRecord> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(records[0].value.to_string(), "1");
}

#[test]
fn poly_json_round_trip() {
    let o = run(&["poly", "--n", "0..3", "--alpha", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let records: Vec<PolyRecord> = assert_round_trip(&stdout(&o));
    assert_eq!(records[2].classical, vec!["1/6", "-1", "1"]);
}

#[test]
fn verify_subsets_pass() {
    let o = run(&["verify", "--only", "T11", "--n", "2..6", "--alpha", "1..3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let out: VerifyOutput = assert_round_trip(&stdout(&o));
    assert_eq!(out.summary.total, 15);
    assert_eq!(out.summary.failed, 0);

    let o = run(&["verify", "--only", "T8", "--d", "1", "--n", "0..4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("identity_id,params,passed\n"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("T8,") && l.ends_with(",true")));
}

#[test]
fn verify_full_keeps_forms() {
    let o = run(&["verify", "--only", "T9", "--n", "1", "--alpha", "1", "--x", "0", "--full", "--format", "json"]);
    let out: VerifyOutput = assert_round_trip(&stdout(&o));
    assert_eq!(out.reports.len(), 1);
    assert_eq!(out.reports[0].lhs.as_ref().unwrap().to_string(), "q / 1 + q");
}

#[test]
fn negative_x_range() {
    let o = run(&["verify", "--only", "T4-consistency", "--n", "2", "--alpha", "1", "--x", "-2..-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("total 2 passed 2 failed 0"));
}

#[test]
fn padic_tables() {
    let o = run(&["padic", "--p", "3", "--n", "1", "--alpha", "1", "--levels", "1..5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let profiles: Vec<PadicProfileRecord> = assert_round_trip(&stdout(&o));
    let defects: Vec<i64> = profiles[0].levels.iter().map(|l| l.defect_valuation).collect();
    assert!(defects.windows(2).all(|w| w[1] >= w[0]));
    assert!(profiles[0].nondecreasing);

    let o = run(&["padic", "--p", "3", "--n", "0", "--levels", "1..3", "--format", "json"]);
    let profiles: Vec<PadicProfileRecord> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(profiles.iter().flat_map(|p| &p.levels).all(|l| l.saturated));
}

#[test]
fn padic_integral_equation() {
    let o = run(&["padic", "--p", "5", "--n", "0..2", "--alpha", "1", "--integral", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let profiles: Vec<PadicProfileRecord> = assert_round_trip(&stdout(&o));
    assert!(profiles.iter().all(|p| p.integral_equation.iter().all(|i| i.passed)));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["padic", "--p", "2"]).status.code(), Some(2));
    assert_eq!(run(&["padic", "--p", "11"]).status.code(), Some(2));
    assert_eq!(run(&["padic", "--p", "3", "--levels", "1..7"]).status.code(), Some(2));
    assert_eq!(run(&["padic", "--p", "3", "--q", "5"]).status.code(), Some(2));
    assert_eq!(run(&["numbers", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["numbers", "--alpha", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--only", "T3"]).status.code(), Some(2));
    assert_eq!(run(&["gfcheck", "--q", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn gfcheck_json() {
    let o = run(&["gfcheck", "--alpha", "2", "--q", "0.3", "--t", "0.2", "--x", "1", "--n", "1", "--printed", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let out: GfOutput = assert_round_trip(&stdout(&o));
    assert_eq!(out.failed, 0);
    let printed: Vec<_> = out.rows.iter().filter(|r| !r.gating).collect();
    assert_eq!(printed.len(), 1);
    assert!(!printed[0].passed);
}

#[test]
fn format_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_wqbern"))
        .args(["numbers", "--n", "1", "--alpha", "1"])
        .env("WQBERN_FORMAT", "csv")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("n,alpha,value,value_at_1\n"));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("wqbern-cli-{}.json", std::process::id()));
    let o = run(&["numbers", "--n", "0..2", "--alpha", "1", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let records: Vec<NumberRecord> = assert_round_trip(&text);
    assert_eq!(records.len(), 3);
}
