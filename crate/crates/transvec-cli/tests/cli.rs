//! End-to-end tests of the `transvec` binary: exit codes, output formats,
//! determinism, and round-trips through the library parsers.

use std::path::Path;
use std::process::{Command, Output};

use transvec::circuit::parse_circuit_text;
use transvec::code::parse_code_text;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transvec")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).expect("fixture write");
}

#[test]
fn code_info_prints_table_and_exits_zero() {
    let out = run(&["code", "info", "--builtin", "833"]);
    assert_eq!(code_of(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("[[8, 3, 3]] 833"), "{text}");
    assert!(text.contains("S1 XXXXXXXX"), "{text}");
    assert!(text.contains("Z3 ZZIZIIZI"), "{text}");
    assert!(text.trim_end().ends_with("ok"), "{text}");
}

#[test]
fn code_info_unknown_builtin_exits_two() {
    let out = run(&["code", "info", "--builtin", "999"]);
    assert_eq!(code_of(&out), 2);
    assert!(stderr(&out).contains("unknown built-in code"));
}

#[test]
fn code_save_then_validate_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("builtin.code");
    let save = run(&["code", "save", "--builtin", "833", "--out", file.to_str().unwrap()]);
    assert_eq!(code_of(&save), 0, "{}", stderr(&save));
    let text = std::fs::read_to_string(&file).unwrap();
    let parsed = parse_code_text(&text).unwrap();
    assert_eq!((parsed.n(), parsed.k()), (8, 3));
    let check = run(&["code", "validate", "--code", file.to_str().unwrap()]);
    assert_eq!(code_of(&check), 0, "{}", stderr(&check));
}

#[test]
fn invalid_but_parseable_code_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("broken.code");
    // X1 and Z1 anticommute, so the stabilizer set is not abelian
    write(&file, "code n=2 k=0\nS X1\nS Z1\n");
    let out = run(&["code", "validate", "--code", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 3, "{}", stderr(&out));
}

#[test]
fn unparseable_code_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("garbage.code");
    write(&file, "not a code file\n");
    let out = run(&["code", "validate", "--code", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 2, "{}", stderr(&out));
}

#[test]
fn synth_reduced_benchmark_lands_on_weight_four_support() {
    let out = run(&[
        "synth",
        "--builtin",
        "833",
        "--logical",
        "X1 Z2 X3",
        "--theta",
        "pi/2",
        "--reduce",
        "exhaustive",
    ]);
    assert_eq!(code_of(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# physical -IIXXZIIZ"), "{text}");
    assert!(text.contains("circuit n=8"), "{text}");
    // central rotation on the highest support qubit (0-based qubit 7)
    assert!(text.contains("RZ 7 "), "{text}");
    let circuit = parse_circuit_text(&text).expect("text output parses back");
    assert_eq!(circuit.n, 8);
    let cnots =
        circuit.gates.iter().filter(|g| matches!(g, transvec::circuit::Gate::Cnot { .. })).count();
    assert_eq!(cnots, 6);
}

#[test]
fn synth_json_is_machine_readable() {
    let out =
        run(&["synth", "--builtin", "833", "--logical", "X1 Z2 X3", "--theta", "pi/2", "--json"]);
    assert_eq!(code_of(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json output");
    assert_eq!(v["n"], 8);
    assert_eq!(v["representative"], "-IZIXYYZX");
    assert!(v["circuit"]["gates"].as_array().is_some());
}

#[test]
fn reduce_reports_both_weights() {
    let out = run(&["reduce", "--builtin", "833", "--logical", "X1 Z2 X3"]);
    assert_eq!(code_of(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("lifted  -IZIXYYZX weight 6"), "{text}");
    assert!(text.contains("reduced -IIXXZIIZ weight 4"), "{text}");
}

#[test]
fn verify_passes_at_generic_angle() {
    let out = run(&["verify", "--builtin", "833", "--logical", "X1 Z2 X3", "--theta", "0.7"]);
    assert_eq!(code_of(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("pass stabilizer centralization"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn verify_json_reports_all_pass() {
    let out =
        run(&["verify", "--builtin", "833", "--logical", "X1 Z2 X3", "--theta", "0.7", "--json"]);
    assert_eq!(code_of(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json output");
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["logical_action"]["all_pass"], true);
    assert_eq!(v["centralization"]["all_pass"], true);
    assert_eq!(v["logical_action"]["entries"].as_array().map(Vec::len), Some(6));
}

#[test]
fn oracle_certifies_the_benchmark_rotation() {
    let out = run(&[
        "oracle",
        "--builtin",
        "833",
        "--logical",
        "X1 Z2 X3",
        "--theta",
        "0.9",
        "--reduce",
        "exhaustive",
    ]);
    assert_eq!(code_of(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("15/15 checks passed"), "{text}");
}

#[test]
fn oracle_rejects_codes_beyond_dense_capacity() {
    let dir = tempfile::tempdir().unwrap();
    let hx = dir.path().join("hx.txt");
    let hz = dir.path().join("hz.txt");
    // 12-qubit chain: one all-ones X check, eleven adjacent-pair Z checks
    write(&hx, "cols=12\n0 1 2 3 4 5 6 7 8 9 10 11\n");
    let rows: String = (0..10).map(|i| format!("{i} {}\n", i + 1)).collect();
    write(&hz, &format!("cols=12\n{rows}"));
    let code_file = dir.path().join("chain.code");
    let build = run(&[
        "code",
        "from-css",
        "--hx",
        hx.to_str().unwrap(),
        "--hz",
        hz.to_str().unwrap(),
        "--out",
        code_file.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&build), 0, "{}", stderr(&build));
    let out = run(&[
        "oracle",
        "--code",
        code_file.to_str().unwrap(),
        "--logical",
        "X1",
        "--theta",
        "0.3",
    ]);
    assert_eq!(code_of(&out), 4, "{}", stderr(&out));
}

#[test]
fn malformed_theta_exits_two() {
    let out = run(&["synth", "--builtin", "833", "--logical", "X1 Z2 X3", "--theta", "pie"]);
    assert_eq!(code_of(&out), 2, "{}", stderr(&out));
}

#[test]
fn simulate_is_deterministic_and_emits_csv() {
    let args = [
        "simulate",
        "--builtin",
        "833",
        "--logical",
        "X1 Z2 X3",
        "--reduce",
        "exhaustive",
        "--p",
        "1e-3:1e-2:log4",
        "--shots",
        "2000",
        "--decoder",
        "lookup",
        "--seed",
        "7",
    ];
    let first = run(&args);
    assert_eq!(code_of(&first), 0, "{}", stderr(&first));
    let second = run(&args);
    let a = stdout(&first);
    assert_eq!(a, stdout(&second), "same flags and seed must reproduce");
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("p,shots,failures,rate,ci_lo,ci_hi,seed"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn simulate_json_carries_results_and_crossing() {
    let out = run(&[
        "simulate",
        "--builtin",
        "833",
        "--logical",
        "X1 Z2 X3",
        "--reduce",
        "exhaustive",
        "--p",
        "1e-3,1e-2",
        "--shots",
        "1000",
        "--decoder",
        "bp-osd",
        "--seed",
        "3",
        "--json",
    ]);
    assert_eq!(code_of(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json output");
    assert_eq!(v["decoder"], "bp-osd");
    assert_eq!(v["results"].as_array().map(Vec::len), Some(2));
    assert!(v["results"][0]["rate"].is_number());
    assert!(v.get("pseudothreshold").is_some());
}
