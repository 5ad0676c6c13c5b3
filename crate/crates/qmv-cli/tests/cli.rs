//! End-to-end tests of the command-line interface: output formats, exit
//! codes, and the verification harness.

use std::process::{Command, Output};

fn qmv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn fidelity_majority_three() {
    let out = qmv(&["fidelity", "00"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("8/9"));
    assert!(text.contains("0.888889"));
}

#[test]
fn fidelity_majority_seven() {
    let out = qmv(&["fidelity", "0000"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("2888/3675"));
}

#[test]
fn fidelity_rejects_non_binary_table() {
    let out = qmv(&["fidelity", "0x1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fidelity_json_round_trips() {
    let out = qmv(&["fidelity", "01", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["fidelity"], "3/5");
    assert_eq!(value["t"][0], "1/2");
    assert_eq!(value["n"], 3);
}

#[test]
fn fidelity_with_promise_weights() {
    // Restricting 5-bit majority to weights {0} allows perfect fidelity.
    let out = qmv(&["fidelity", "000", "--promise-weights", "0", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["fidelity"], "1");

    let bad = qmv(&["fidelity", "000", "--promise-weights", "0,x"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn majority_table_rows() {
    let out = qmv(&["majority-table", "9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("9,15014/19845,0.756563,true"));
    assert!(text.contains("3,8/9,0.888889,true"));
    assert!(!text.contains("false"));

    let bad = qmv(&["majority-table", "4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn choi_golden_comparisons() {
    let out = qmv(&["choi", "1", "--ideal", "--golden"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("golden match: NOT"));

    let out = qmv(&["choi", "00", "--optimal", "--golden"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("golden match: MAJ3"));
}

#[test]
fn choi_emits_parseable_matrix() {
    let out = qmv(&["choi", "000", "--ideal"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["rows"], 64);
    assert_eq!(value["is_cp"], false);
    // Trace-preservation of the emitted matrix.
    let matrix = qmv::qmat::QMatrix::from_json(&value).unwrap();
    let reduced = matrix.partial_trace_first(2, 32).unwrap();
    assert_eq!(reduced, qmv::qmat::QMatrix::identity(32));
}

#[test]
fn choi_rejects_oversized_and_ambiguous_requests() {
    let out = qmv(&["choi", "0000", "--ideal"]);
    assert_eq!(out.status.code(), Some(3));
    let out = qmv(&["choi", "00"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qmv(&["choi", "00", "--optimal", "--ideal"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_emits_comparison_csv() {
    let out = qmv(&["simulate", "01"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("function,h,simulated,exact,delta"));
    assert!(text.contains("01,1,0.6000000"));

    let out = qmv(&["simulate", "00000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_quick_passes() {
    let out = qmv(&["verify", "--level", "quick"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS table3"));
    assert!(text.contains("CONJECTURE parity closed form"));
    assert!(!text.contains("n=7 sweep"));
}

#[test]
fn verify_full_includes_seven_bit_sweep() {
    let out = qmv(&["verify", "--level", "full"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS n=7 sweep"));
}

#[test]
fn verify_detects_injected_fault() {
    let out = qmv(&["verify", "--level", "quick", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL table3"));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = qmv(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
