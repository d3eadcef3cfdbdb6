//! Command-line front end for the `transvec` toolchain.
//!
//! Subcommands mirror the pipeline: `code` inspects and constructs
//! stabilizer codes, `synth` and `reduce` compile logical rotations into
//! physical circuits, `verify` and `oracle` certify a compiled circuit
//! (symbolically and against the dense simulator), and `simulate` estimates
//! logical failure rates under depolarizing noise.
//!
//! Exit codes: 0 success, 2 bad input or configuration, 3 validation or
//! verification failure, 4 capacity limit exceeded, 5 internal invariant
//! violation.

use clap::{Args, Parser, Subcommand};
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use transvec::circuit::{reduce_weight, synthesize_trotter, ReduceStrategy};
use transvec::code::{builtin, from_css_checks, load_code_unvalidated, StabilizerCode};
use transvec::decoder::{parse_check_matrix, Decoder, DecoderConfig};
use transvec::noise::{pseudothreshold, results_to_csv, run_sweep, FailureScope, NoiseModel};
use transvec::oracle::{dense_circuit, dense_pauli, dense_sum, dense_trotter, ORACLE_TOLERANCE};
use transvec::pauli::{format_pauli, parse_pauli, PhasedPauli};
use transvec::propagate::{
    conjugate_circuit, double_angle_product, verify_logical_action,
    verify_stabilizer_centralization,
};
use transvec::{Error, Result};

#[derive(Parser)]
#[command(
    name = "transvec",
    version,
    about = "Compile, verify, and benchmark \
logical Pauli rotations on stabilizer codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect, validate, convert, and construct stabilizer codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Compile a logical Pauli rotation into a physical circuit.
    Synth(SynthArgs),
    /// Weight-reduce a lifted logical operator over its stabilizer coset.
    Reduce(ReduceArgs),
    /// Check a compiled circuit symbolically against its logical contract.
    Verify(VerifyArgs),
    /// Certify a compiled circuit against the dense matrix simulator.
    Oracle(OracleArgs),
    /// Monte Carlo failure-rate sweep under depolarizing noise.
    Simulate(SimulateArgs),
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Print parameters, generators, and the validation report.
    Info(CodeReportArgs),
    /// Run the invariant checks and report violations.
    Validate(CodeReportArgs),
    /// Write a code to a file in the text format.
    Save(CodeSaveArgs),
    /// Build a CSS code from a pair of check matrix files.
    FromCss(FromCssArgs),
}

/// Where a code comes from: a built-in name or a file.
#[derive(Args)]
struct CodeSource {
    /// Built-in code name (e.g. "833").
    #[arg(long, value_name = "NAME", conflicts_with = "code")]
    builtin: Option<String>,
    /// Path to a code definition file.
    #[arg(long, value_name = "FILE")]
    code: Option<PathBuf>,
}

impl CodeSource {
    fn load_unvalidated(&self) -> Result<StabilizerCode> {
        match (&self.builtin, &self.code) {
            (Some(name), None) => builtin(name).ok_or_else(|| {
                Error::invalid(format!("unknown built-in code {name:?}; available: 833"))
            }),
            (None, Some(path)) => load_code_unvalidated(path),
            _ => Err(Error::invalid("exactly one of --builtin or --code is required")),
        }
    }

    fn load(&self) -> Result<StabilizerCode> {
        let code = self.load_unvalidated()?;
        let violations = code.validate();
        if violations.is_empty() {
            Ok(code)
        } else {
            Err(Error::Validation(violations.iter().map(ToString::to_string).collect()))
        }
    }
}

#[derive(Args)]
struct CodeReportArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Emit a JSON object instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CodeSaveArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Destination file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct FromCssArgs {
    /// X-check matrix file (one row per line, 0-based column indices).
    #[arg(long, value_name = "FILE")]
    hx: PathBuf,
    /// Z-check matrix file, same format.
    #[arg(long, value_name = "FILE")]
    hz: PathBuf,
    /// Name recorded in the code header.
    #[arg(long, value_name = "NAME")]
    name: Option<String>,
    /// Write the code here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Emit a JSON object instead of the text format.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Logical Pauli on the k logical qubits (e.g. "X1 Z2 X3" or "XZX").
    #[arg(long, value_name = "PAULI")]
    logical: String,
    /// Rotation angle in radians: "pi", "pi/<int>", optionally negated, or a
    /// float. Exact "pi/2" keeps the circuit Clifford.
    #[arg(long, value_name = "ANGLE", value_parser = parse_theta,
          allow_hyphen_values = true)]
    theta: f64,
    /// Weight-reduce the physical operator first.
    #[arg(long, value_name = "STRATEGY", value_parser = parse_strategy)]
    reduce: Option<ReduceStrategy>,
    /// Write the output here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Emit a JSON object instead of circuit text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Logical Pauli on the k logical qubits.
    #[arg(long, value_name = "PAULI")]
    logical: String,
    /// Search strategy over the stabilizer coset.
    #[arg(long, value_name = "STRATEGY", value_parser = parse_strategy,
          default_value = "exhaustive")]
    strategy: ReduceStrategy,
    /// Emit a JSON object instead of the two-line summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Logical Pauli on the k logical qubits.
    #[arg(long, value_name = "PAULI")]
    logical: String,
    /// Rotation angle in radians ("pi", "pi/<int>", or a float).
    #[arg(long, value_name = "ANGLE", value_parser = parse_theta,
          allow_hyphen_values = true)]
    theta: f64,
    /// Weight-reduce the physical operator first.
    #[arg(long, value_name = "STRATEGY", value_parser = parse_strategy)]
    reduce: Option<ReduceStrategy>,
    /// Emit the full reports as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Logical Pauli on the k logical qubits.
    #[arg(long, value_name = "PAULI")]
    logical: String,
    /// Rotation angle in radians ("pi", "pi/<int>", or a float).
    #[arg(long, value_name = "ANGLE", value_parser = parse_theta,
          allow_hyphen_values = true)]
    theta: f64,
    /// Weight-reduce the physical operator first.
    #[arg(long, value_name = "STRATEGY", value_parser = parse_strategy)]
    reduce: Option<ReduceStrategy>,
    /// Emit the check list as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: CodeSource,
    /// Logical Pauli on the k logical qubits.
    #[arg(long, value_name = "PAULI")]
    logical: String,
    /// Rotation angle; must be an exact multiple of pi/2 for frame
    /// simulation.
    #[arg(long, value_name = "ANGLE", value_parser = parse_theta,
          allow_hyphen_values = true, default_value = "pi/2")]
    theta: f64,
    /// Weight-reduce the physical operator first.
    #[arg(long, value_name = "STRATEGY", value_parser = parse_strategy)]
    reduce: Option<ReduceStrategy>,
    /// Fault rates: "a:b:logN" (geometric), "a:b:linN" (arithmetic), a
    /// comma-separated list, or a single value.
    #[arg(long, value_name = "SWEEP")]
    p: String,
    /// Shots per sweep point.
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    /// Decoder: "lookup" or "bp-osd".
    #[arg(long, value_name = "KIND", default_value = "lookup")]
    decoder: String,
    /// Channel prior used by the bp-osd decoder.
    #[arg(long, value_name = "RATE", default_value_t = 1e-3)]
    prior_p: f64,
    /// Belief propagation iteration cap.
    #[arg(long, value_name = "N", default_value_t = 30)]
    bp_iters: usize,
    /// Min-sum scaling factor.
    #[arg(long, value_name = "F", default_value_t = 0.75)]
    min_sum_scale: f64,
    /// Master seed for the per-shot random streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Count failures only on this logical qubit (1-based); default is a
    /// bit-flip on any logical qubit.
    #[arg(long, value_name = "QUBIT")]
    target: Option<usize>,
    /// Add depolarizing faults after single-qubit gates.
    #[arg(long)]
    single_qubit_noise: bool,
    /// Disable depolarizing faults on idle qubits.
    #[arg(long)]
    no_idle_noise: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Emit results and pseudothreshold as JSON instead of CSV.
    #[arg(long)]
    json: bool,
}

/// Angle grammar: optional leading '-', then "pi", "pi/<positive int>", or a
/// finite float literal. Symbolic forms divide the f64 PI constant, so
/// "pi/2" lands exactly on the value that downstream Clifford detection
/// tests for.
fn parse_theta(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let magnitude = if body == "pi" {
        PI
    } else if let Some(denom) = body.strip_prefix("pi/") {
        let d: u32 = denom
            .parse()
            .map_err(|_| format!("bad denominator in {t:?}: expected pi/<positive integer>"))?;
        if d == 0 {
            return Err(format!("bad denominator in {t:?}: division by zero"));
        }
        PI / f64::from(d)
    } else {
        body.parse::<f64>()
            .map_err(|_| format!("bad angle {t:?}: expected \"pi\", \"pi/<int>\", or a float"))?
    };
    let value = if neg { -magnitude } else { magnitude };
    if !value.is_finite() {
        return Err(format!("angle {t:?} is not finite"));
    }
    Ok(value)
}

fn parse_strategy(s: &str) -> std::result::Result<ReduceStrategy, String> {
    match s {
        "exhaustive" => Ok(ReduceStrategy::Exhaustive),
        "greedy" => Ok(ReduceStrategy::Greedy),
        other => Err(format!("unknown strategy {other:?}: expected exhaustive or greedy")),
    }
}

/// Sweep grammar: "a:b:logN" geometric, "a:b:linN" arithmetic (both
/// inclusive, N >= 2), a comma-separated list, or one value.
fn parse_sweep(expr: &str) -> Result<Vec<f64>> {
    let bad = |msg: String| Error::parse(format!("sweep {expr:?}: {msg}"));
    let num = |tok: &str| -> Result<f64> {
        tok.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad(format!("bad number {tok:?}")))
    };
    let parts: Vec<&str> = expr.split(':').collect();
    if parts.len() == 3 {
        let (a, b) = (num(parts[0])?, num(parts[1])?);
        let tail = parts[2].trim();
        let (log, count_str) = match tail.strip_prefix("log") {
            Some(rest) => (true, rest),
            None => (
                false,
                tail.strip_prefix("lin")
                    .ok_or_else(|| bad("third field must be logN or linN".into()))?,
            ),
        };
        let count: usize =
            count_str.parse().map_err(|_| bad(format!("bad point count {count_str:?}")))?;
        if count < 2 {
            return Err(bad("a range needs at least 2 points".into()));
        }
        if log && (a <= 0.0 || b <= 0.0) {
            return Err(bad("log spacing needs positive endpoints".into()));
        }
        let steps = (count - 1) as f64;
        return Ok((0..count)
            .map(|i| {
                let t = i as f64 / steps;
                if log {
                    (a.ln() + t * (b.ln() - a.ln())).exp()
                } else {
                    a + t * (b - a)
                }
            })
            .collect());
    }
    if parts.len() != 1 {
        return Err(bad("expected a:b:logN, a:b:linN, a comma list, or one value".into()));
    }
    expr.split(',').map(num).collect()
}

fn parse_logical(code: &StabilizerCode, s: &str) -> Result<PhasedPauli> {
    parse_pauli(s, code.k())
        .map_err(|e| Error::parse(format!("logical operator on k={} qubits: {e}", code.k())))
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::internal(format!("serializing report: {e}")))?;
    println!("{text}");
    Ok(())
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_code_report(a: &CodeReportArgs, table: bool) -> Result<()> {
    let code = a.source.load_unvalidated()?;
    let violations: Vec<String> = code.validate().iter().map(ToString::to_string).collect();
    if a.json {
        let paulis = |v: &[PhasedPauli]| v.iter().map(format_pauli).collect::<Vec<_>>();
        print_json(&serde_json::json!({
            "name": code.name,
            "n": code.n(),
            "k": code.k(),
            "distance": code.distance,
            "stabilizers": paulis(code.stabilizers()),
            "logical_x": paulis(code.logical_x()),
            "logical_z": paulis(code.logical_z()),
            "valid": violations.is_empty(),
            "violations": violations,
        }))?;
    } else {
        if table {
            let d = code.distance.map(|d| format!(", {d}")).unwrap_or_default();
            let name = code.name.as_ref().map(|s| format!(" {s}")).unwrap_or_default();
            println!("[[{}, {}{}]]{}", code.n(), code.k(), d, name);
            for (i, s) in code.stabilizers().iter().enumerate() {
                println!("S{} {}", i + 1, format_pauli(s));
            }
            for (i, x) in code.logical_x().iter().enumerate() {
                println!("X{} {}", i + 1, format_pauli(x));
            }
            for (i, z) in code.logical_z().iter().enumerate() {
                println!("Z{} {}", i + 1, format_pauli(z));
            }
        }
        if violations.is_empty() {
            println!("ok");
        } else {
            for v in &violations {
                println!("violation: {v}");
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(violations))
    }
}

fn cmd_code_save(a: &CodeSaveArgs) -> Result<()> {
    a.source.load()?.save(&a.out)
}

fn cmd_code_from_css(a: &FromCssArgs) -> Result<()> {
    let hx = parse_check_matrix(&std::fs::read_to_string(&a.hx)?)?;
    let hz = parse_check_matrix(&std::fs::read_to_string(&a.hz)?)?;
    let code = from_css_checks(&hx, &hz, a.name.clone())?;
    if a.json {
        let paulis = |v: &[PhasedPauli]| v.iter().map(format_pauli).collect::<Vec<_>>();
        return print_json(&serde_json::json!({
            "name": code.name,
            "n": code.n(),
            "k": code.k(),
            "stabilizers": paulis(code.stabilizers()),
            "logical_x": paulis(code.logical_x()),
            "logical_z": paulis(code.logical_z()),
        }));
    }
    write_or_print(&a.out, &code.to_text())
}

// Shared head of the compilation pipeline: load, parse, lift, reduce.
fn lift_representative(
    source: &CodeSource,
    logical: &str,
    reduce: Option<ReduceStrategy>,
) -> Result<(StabilizerCode, PhasedPauli, PhasedPauli)> {
    let code = source.load()?;
    let logical = parse_logical(&code, logical)?;
    let lifted = code.lift(&logical)?;
    let rep = match reduce {
        Some(strategy) => reduce_weight(&lifted, &code, strategy)?,
        None => lifted,
    };
    Ok((code, logical, rep))
}

fn cmd_synth(a: &SynthArgs) -> Result<()> {
    let (code, logical, rep) = lift_representative(&a.source, &a.logical, a.reduce)?;
    let circuit = synthesize_trotter(&rep, a.theta)?;
    if a.json {
        let v = serde_json::json!({
            "code": code.name,
            "n": code.n(),
            "logical": format_pauli(&logical),
            "theta": a.theta,
            "representative": format_pauli(&rep),
            "reduced": a.reduce.is_some(),
            "depth": circuit.depth(),
            "cnots": circuit.cnot_count(),
            "support": circuit.support(),
            "circuit": circuit,
        });
        let text = serde_json::to_string_pretty(&v)
            .map_err(|e| Error::internal(format!("serializing circuit: {e}")))?;
        return write_or_print(&a.out, &format!("{text}\n"));
    }
    let mut text = format!(
        "# logical {} theta {}\n# physical {}\n# depth {} cnots {}\n",
        format_pauli(&logical),
        a.theta,
        format_pauli(&rep),
        circuit.depth(),
        circuit.cnot_count(),
    );
    text.push_str(&circuit.to_text());
    write_or_print(&a.out, &text)
}

fn cmd_reduce(a: &ReduceArgs) -> Result<()> {
    let code = a.source.load()?;
    let logical = parse_logical(&code, &a.logical)?;
    let lifted = code.lift(&logical)?;
    let reduced = reduce_weight(&lifted, &code, a.strategy)?;
    if a.json {
        return print_json(&serde_json::json!({
            "logical": format_pauli(&logical),
            "lifted": format_pauli(&lifted),
            "lifted_weight": lifted.weight(),
            "reduced": format_pauli(&reduced),
            "reduced_weight": reduced.weight(),
            "strategy": a.strategy,
        }));
    }
    println!("lifted  {} weight {}", format_pauli(&lifted), lifted.weight());
    println!("reduced {} weight {}", format_pauli(&reduced), reduced.weight());
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<()> {
    let (code, logical, rep) = lift_representative(&a.source, &a.logical, a.reduce)?;
    let action = verify_logical_action(&code, &logical, a.theta, a.reduce)?;
    let central = verify_stabilizer_centralization(&code, &rep, a.theta)?;
    let all_pass = action.all_pass && central.all_pass;
    if a.json {
        print_json(&serde_json::json!({
            "logical_action": action,
            "centralization": central,
            "all_pass": all_pass,
        }))?;
    } else {
        println!(
            "physical {} depth {} cnots {}",
            action.representative, action.circuit_depth, action.circuit_cnots
        );
        for e in &action.entries {
            let status = if e.pass { "pass" } else { "FAIL" };
            println!("{} {}  {}", status, e.generator, e.actual.join(" + "));
            if !e.pass {
                println!("  expected {}", e.expected.join(" + "));
            }
        }
        let status = if central.all_pass { "pass" } else { "FAIL" };
        println!("{status} stabilizer centralization");
        for e in central.entries.iter().filter(|e| !e.pass) {
            println!("  S{} -> {}", e.stabilizer + 1, e.image.join(" + "));
        }
    }
    if all_pass {
        Ok(())
    } else {
        Err(Error::Validation(vec!["circuit action does not match the requested rotation".into()]))
    }
}

struct OracleCheck {
    name: String,
    pass: bool,
}

fn cmd_oracle(a: &OracleArgs) -> Result<()> {
    let (code, _logical, rep) = lift_representative(&a.source, &a.logical, a.reduce)?;
    let circuit = synthesize_trotter(&rep, a.theta)?;
    let u = dense_circuit(&circuit)?;
    let herm = rep.hermitian_part();
    // engine sums are symbolic in the emitted gate angle
    let gate_theta = f64::from(rep.hermitian_sign()) * a.theta;
    let mut checks = Vec::new();

    let v = dense_trotter(&herm, a.theta)?;
    checks.push(OracleCheck {
        name: format!("circuit equals the rotation by {} up to global phase", format_pauli(&herm)),
        pass: u.approx_eq_up_to_phase(&v, ORACLE_TOLERANCE),
    });

    let mut generators: Vec<(String, PhasedPauli)> = Vec::new();
    for (i, s) in code.stabilizers().iter().enumerate() {
        generators.push((format!("S{}", i + 1), s.clone()));
    }
    for i in 0..code.k() {
        for letter in ['X', 'Z'] {
            let g = code.lift(&PhasedPauli::single(code.k(), i, letter))?;
            generators.push((format!("{letter}{}", i + 1), g));
        }
    }
    for (label, g) in &generators {
        let image = conjugate_circuit(g, &circuit)?;
        let got = dense_sum(&image, gate_theta)?;
        let want = u.conjugate(&dense_pauli(g)?);
        checks.push(OracleCheck {
            name: format!("conjugation of {label} matches the dense image"),
            pass: got.approx_eq(&want, ORACLE_TOLERANCE),
        });
    }

    // reflections q with {q, P} = 0 turn the rotation into its double angle
    let want_double = dense_trotter(&herm, -2.0 * a.theta)?;
    for (label, g) in generators.iter().filter(|(_, g)| !g.commutes_with(&rep)) {
        let q = g.hermitian_part();
        let symbolic = dense_sum(&double_angle_product(&q, &rep, a.theta)?, a.theta)?;
        let qd = dense_pauli(&q)?;
        let matrix = qd.mul(&u.conjugate(&qd));
        checks.push(OracleCheck {
            name: format!("double-angle product with {label} equals the -2 theta rotation"),
            pass: symbolic.approx_eq(&want_double, ORACLE_TOLERANCE)
                && matrix.approx_eq(&want_double, ORACLE_TOLERANCE),
        });
    }

    let all_pass = checks.iter().all(|c| c.pass);
    if a.json {
        let rows: Vec<serde_json::Value> =
            checks.iter().map(|c| serde_json::json!({ "name": c.name, "pass": c.pass })).collect();
        print_json(&serde_json::json!({ "checks": rows, "all_pass": all_pass }))?;
    } else {
        for c in &checks {
            println!("{} {}", if c.pass { "pass" } else { "FAIL" }, c.name);
        }
        let passed = checks.iter().filter(|c| c.pass).count();
        println!("{passed}/{} checks passed", checks.len());
    }
    if all_pass {
        Ok(())
    } else {
        Err(Error::Validation(vec!["dense certification failed".into()]))
    }
}

fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let (code, _logical, rep) = lift_representative(&a.source, &a.logical, a.reduce)?;
    let circuit = synthesize_trotter(&rep, a.theta)?;
    let decoder = match a.decoder.as_str() {
        "lookup" => Decoder::lookup(&code)?,
        "bp-osd" => Decoder::bp_osd(
            &code,
            DecoderConfig {
                prior_p: a.prior_p,
                bp_max_iters: a.bp_iters,
                min_sum_scale: a.min_sum_scale,
            },
        )?,
        other => {
            return Err(Error::invalid(format!(
                "unknown decoder {other:?}: expected lookup or bp-osd"
            )))
        }
    };
    let scope = match a.target {
        Some(i) => {
            if i == 0 || i > code.k() {
                return Err(Error::invalid(format!(
                    "target logical qubit {i} out of range 1..={}",
                    code.k()
                )));
            }
            FailureScope::Targeted(i - 1)
        }
        None => FailureScope::AnyLogical,
    };
    let noise = NoiseModel {
        p: 0.0,
        cnot_noise: true,
        idle_noise: !a.no_idle_noise,
        single_qubit_gate_noise: a.single_qubit_noise,
    };
    let ps = parse_sweep(&a.p)?;
    let results = run_sweep(&code, &circuit, &decoder, &noise, scope, &ps, a.shots, a.seed)?;
    let crossing = pseudothreshold(&results);
    if a.json {
        return print_json(&serde_json::json!({
            "circuit": format_pauli(&rep),
            "decoder": decoder.name(),
            "results": results,
            "pseudothreshold": crossing,
        }));
    }
    write_or_print(&a.out, &results_to_csv(&results))?;
    if let Some(p) = crossing {
        eprintln!("pseudothreshold {p:.5e}");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Cmd::Code(CodeCmd::Info(a)) => cmd_code_report(a, true),
        Cmd::Code(CodeCmd::Validate(a)) => cmd_code_report(a, false),
        Cmd::Code(CodeCmd::Save(a)) => cmd_code_save(a),
        Cmd::Code(CodeCmd::FromCss(a)) => cmd_code_from_css(a),
        Cmd::Synth(a) => cmd_synth(a),
        Cmd::Reduce(a) => cmd_reduce(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Oracle(a) => cmd_oracle(a),
        Cmd::Simulate(a) => cmd_simulate(a),
    }
}

/// Restore the default SIGPIPE disposition so that piping output into a
/// consumer that exits early (`transvec code info | head`) terminates the
/// process quietly instead of panicking on a closed stdout.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn theta_grammar() {
        assert_eq!(parse_theta("pi").unwrap(), PI);
        assert_eq!(parse_theta("pi/2").unwrap(), FRAC_PI_2);
        assert_eq!(parse_theta("-pi/2").unwrap(), -FRAC_PI_2);
        assert_eq!(parse_theta("pi/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_theta("0.25").unwrap(), 0.25);
        assert_eq!(parse_theta("-1.5e-1").unwrap(), -0.15);
        assert!(parse_theta("pi/0").is_err());
        assert!(parse_theta("tau").is_err());
        assert!(parse_theta("inf").is_err());
        assert!(parse_theta("nan").is_err());
    }

    #[test]
    fn theta_symbolic_form_is_clifford_exact() {
        // the quarter-turn detector must see "pi/2" as exactly one turn
        assert_eq!(transvec::circuit::quarter_turns(parse_theta("pi/2").unwrap()), Some(1));
        assert_eq!(transvec::circuit::quarter_turns(parse_theta("-pi").unwrap()), Some(-2));
    }

    #[test]
    fn sweep_grammar() {
        assert_eq!(parse_sweep("1e-3").unwrap(), vec![1e-3]);
        assert_eq!(parse_sweep("1e-3,5e-3,1e-2").unwrap(), vec![1e-3, 5e-3, 1e-2]);
        let lin = parse_sweep("0.1:0.5:lin5").unwrap();
        assert_eq!(lin.len(), 5);
        assert!((lin[0] - 0.1).abs() < 1e-12 && (lin[4] - 0.5).abs() < 1e-12);
        assert!((lin[1] - 0.2).abs() < 1e-12);
        let log = parse_sweep("1e-3:1e-2:log8").unwrap();
        assert_eq!(log.len(), 8);
        assert!((log[0] - 1e-3).abs() < 1e-15 && (log[7] - 1e-2).abs() < 1e-14);
        let ratio = log[1] / log[0];
        for w in log.windows(2) {
            assert!((w[1] / w[0] - ratio).abs() < 1e-9);
        }
        assert!(parse_sweep("1e-3:1e-2:log1").is_err());
        assert!(parse_sweep("-1e-3:1e-2:log4").is_err());
        assert!(parse_sweep("0:1e-2:log4").is_err());
        assert!(parse_sweep("1e-3:1e-2:geo4").is_err());
        assert!(parse_sweep("a,b").is_err());
        assert!(parse_sweep("1:2:3:4").is_err());
    }

    #[test]
    fn strategy_grammar() {
        assert_eq!(parse_strategy("exhaustive").unwrap(), ReduceStrategy::Exhaustive);
        assert_eq!(parse_strategy("greedy").unwrap(), ReduceStrategy::Greedy);
        assert!(parse_strategy("Exhaustive").is_err());
    }
}
