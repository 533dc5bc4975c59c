//! `catqm`: typecheck and run declaration scripts, evaluate terms to
//! matrices, verify flow network files, and run the built-in protocol
//! suites.
//!
//! Exit codes: 0 when everything passes, 1 when an assertion or verdict
//! fails, 2 on I/O, parse or type errors.

use catqm::dsl::{elaborate, parse, run_asserts, AssertionReport, Program};
use catqm::flow::FlowNetwork;
use catqm::gen::{self, ChaCha8Rng};
use catqm::matrix::{matrix_to_json, matrix_to_text};
use catqm::protocols::{
    self, compositionality_check, entanglement_swap_spec, gate_teleportation_spec,
    teleportation_spec, teleportation_variant, CorrectionMode, Report,
};
use catqm::term::qubit;
use catqm::{eval, Backend, BackendKind, Complex64, ObjectType, ScalarRing, Term, DEFAULT_TOL};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "catqm", version, about = "Typed term language for compact closed categories with biproducts, evaluated over complex matrices or boolean relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Semantic backend the script or network is evaluated in.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Fdhilb)]
    backend: BackendArg,

    /// Tolerance for approximate equality of complex entries.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,

    /// Seed for the randomized parts of the protocol suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and typecheck a script, without running assertions.
    Check { input: PathBuf },
    /// Evaluate one named term of a script and print its matrix.
    Eval {
        input: PathBuf,
        /// Name of the term to evaluate.
        #[arg(long)]
        term: String,
    },
    /// Run a script's assertions.
    Verify { input: PathBuf },
    /// Check the line semantics of a flow network file: trace the path and
    /// compare the composite-label prediction against the projector oracle.
    Trace {
        input: PathBuf,
        /// Fail on crossings that run against a box's declared orientation
        /// instead of recording them.
        #[arg(long)]
        strict: bool,
    },
    /// Run the built-in protocol suites (teleportation, entanglement swap,
    /// gate teleportation, compositionality).
    Protocols,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Fdhilb,
    Rel,
}

impl BackendArg {
    fn kind(self) -> BackendKind {
        match self {
            BackendArg::Fdhilb => BackendKind::FdHilb,
            BackendArg::Rel => BackendKind::Rel,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol > 0.0) {
        eprintln!("error: --tol must be positive");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Write a line to stdout, exiting quietly when the consumer has closed
/// the pipe (e.g. `catqm ... | head`).
fn emit_line(line: std::fmt::Arguments) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

macro_rules! emit {
    ($($arg:tt)*) => { emit_line(format_args!($($arg)*)) };
}

/// Ok(passed) for runs that completed; Err(message) for parse/type/I/O
/// failures.
fn run(cli: &Cli) -> Result<bool, String> {
    let backend = Backend { kind: cli.backend.kind(), tol: cli.tol };
    match &cli.command {
        Command::Check { input } => {
            let program = load_program(input)?;
            let elaborated =
                elaborate(&program, backend.kind).map_err(|e| format!("{}: {e}", input.display()))?;
            match cli.output {
                OutputArg::Text => emit!(
                    "ok: {} objects, {} terms, {} assertions",
                    elaborated.objects.len(),
                    elaborated.terms.len(),
                    elaborated.asserts.len()
                ),
                OutputArg::Json => print_json(&json!({
                    "command": "check",
                    "pass": true,
                    "objects": elaborated.objects.len(),
                    "terms": elaborated.terms.len(),
                    "assertions": elaborated.asserts.len(),
                })),
            }
            Ok(true)
        }
        Command::Eval { input, term } => {
            let program = load_program(input)?;
            let elaborated =
                elaborate(&program, backend.kind).map_err(|e| format!("{}: {e}", input.display()))?;
            let (t, judgment) = elaborated
                .terms
                .get(term)
                .ok_or_else(|| format!("{}: no term named '{term}'", input.display()))?;
            match backend.kind {
                BackendKind::FdHilb => print_eval::<Complex64>(cli, term, t, &judgment.to_string()),
                BackendKind::Rel => print_eval::<bool>(cli, term, t, &judgment.to_string()),
            }
        }
        Command::Verify { input } => {
            let program = load_program(input)?;
            let report =
                run_asserts(&program, backend).map_err(|e| format!("{}: {e}", input.display()))?;
            print_assertion_report(cli, &report);
            Ok(report.pass)
        }
        Command::Trace { input, strict } => {
            let text = read_file(input)?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| format!("{}: invalid JSON: {e}", input.display()))?;
            match backend.kind {
                BackendKind::FdHilb => trace::<Complex64>(cli, input, &value, *strict),
                BackendKind::Rel => trace::<bool>(cli, input, &value, *strict),
            }
        }
        Command::Protocols => run_protocol_suites(cli),
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_program(path: &Path) -> Result<Program, String> {
    let text = read_file(path)?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_json(v: &Value) {
    emit!("{}", serde_json::to_string_pretty(v).expect("report JSON serializes"));
}

fn print_eval<S: ScalarRing>(
    cli: &Cli,
    name: &str,
    t: &Term,
    judgment: &str,
) -> Result<bool, String> {
    let m = eval::<S>(t).map_err(|e| format!("evaluating '{name}': {e}"))?;
    match cli.output {
        OutputArg::Text => {
            emit!("{name} : {judgment}");
            emit!("{}", matrix_to_text(&m));
        }
        OutputArg::Json => print_json(&json!({
            "command": "eval",
            "term": name,
            "type": judgment,
            "matrix": matrix_to_json(&m),
        })),
    }
    Ok(true)
}

fn print_assertion_report(cli: &Cli, report: &AssertionReport) {
    match cli.output {
        OutputArg::Text => {
            for r in &report.results {
                let verdict = if r.pass { "pass" } else { "FAIL" };
                let scalar = match r.scalar {
                    Some(s) if r.pass => format!("  (scalar {})", format_complex(s.re, s.im)),
                    _ => String::new(),
                };
                emit!("line {}: {} {}{}", r.line, r.op.as_str(), verdict, scalar);
            }
            let failed = report.results.iter().filter(|r| !r.pass).count();
            if report.pass {
                emit!("all {} assertions pass", report.results.len());
            } else {
                emit!("{failed} of {} assertions FAILED", report.results.len());
            }
        }
        OutputArg::Json => print_json(&report.to_json()),
    }
}

fn format_complex(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re}")
    } else {
        format!("{re}{im:+}i")
    }
}

fn trace<S: ScalarRing>(
    cli: &Cli,
    input: &Path,
    value: &Value,
    strict: bool,
) -> Result<bool, String> {
    let network = FlowNetwork::<S>::from_json(value)
        .map_err(|e| format!("{}: {e}", input.display()))?;
    let verdict = network
        .verify_flow(strict, cli.tol)
        .map_err(|e| format!("{}: {e}", input.display()))?;
    match cli.output {
        OutputArg::Text => {
            emit!("path: {}", verdict.path.visit_order().join(" -> "));
            match &verdict.scalar {
                Some(s) => {
                    let lit = s.to_literal();
                    emit!("scalar: {}", format_complex(lit.re, lit.im));
                }
                None => emit!("scalar: none (states differ beyond a global factor)"),
            }
            if verdict.k_zero {
                emit!("note: the network annihilates the input (zero oracle state)");
            }
            emit!("verdict: {}", if verdict.pass { "pass" } else { "FAIL" });
        }
        OutputArg::Json => print_json(&verdict.to_json()),
    }
    Ok(verdict.pass)
}

// ───────────────────────────── protocol suites ─────────────────────────────

struct SuiteOutcome {
    name: String,
    pass: bool,
    text: String,
    detail: Value,
}

fn run_protocol_suites(cli: &Cli) -> Result<bool, String> {
    let suites = match cli.backend.kind() {
        BackendKind::FdHilb => fdhilb_suites(cli.tol, cli.seed)?,
        BackendKind::Rel => rel_suites(cli.tol, cli.seed)?,
    };
    let pass = suites.iter().all(|s| s.pass);
    match cli.output {
        OutputArg::Text => {
            for s in &suites {
                emit!("{}: {} ({})", s.name, if s.pass { "pass" } else { "FAIL" }, s.text);
            }
            if pass {
                emit!("all {} suites pass", suites.len());
            } else {
                let failed = suites.iter().filter(|s| !s.pass).count();
                emit!("{failed} of {} suites FAILED", suites.len());
            }
        }
        OutputArg::Json => print_json(&json!({
            "backend": match cli.backend.kind() {
                BackendKind::FdHilb => "fdhilb",
                BackendKind::Rel => "rel",
            },
            "seed": cli.seed,
            "tol": cli.tol,
            "suites": suites.iter().map(|s| json!({
                "name": s.name,
                "pass": s.pass,
                "detail": s.detail,
            })).collect::<Vec<_>>(),
            "pass": pass,
        })),
    }
    Ok(pass)
}

fn branch_summary(report: &Report) -> String {
    let passed = report.branches.iter().filter(|b| b.pass).count();
    format!("{passed}/{} branches", report.branches.len())
}

fn protocol_suite(spec: &protocols::ProtocolSpec, tol: f64) -> Result<SuiteOutcome, String> {
    let report = protocols::verify::<Complex64>(spec, tol).map_err(|e| format!("{}: {e}", spec.name))?;
    Ok(SuiteOutcome {
        name: spec.name.clone(),
        pass: report.pass,
        text: branch_summary(&report),
        detail: report.to_json(),
    })
}

fn fdhilb_suites(tol: f64, seed: u64) -> Result<Vec<SuiteOutcome>, String> {
    let mut suites = vec![
        protocol_suite(&teleportation_spec(false), tol)?,
        protocol_suite(&teleportation_spec(true), tol)?,
        wrong_correction_control(tol)?,
        protocol_suite(&entanglement_swap_spec(), tol)?,
    ];

    let q = qubit();
    let bell = protocols::bell_constants();
    let gate_spec = gate_teleportation_spec(&bell.beta[2], tol).map_err(|e| e.to_string())?;
    let mut gate = protocol_suite(&gate_spec, tol)?;
    gate.name = "gate-teleportation-pauli".into();
    suites.push(gate);

    let mut rng = gen::rng(seed);
    for i in 0..2 {
        let u = gen::unitary_prim(&mut rng, &format!("u{i}"), &q);
        let spec = gate_teleportation_spec(&u, tol).map_err(|e| e.to_string())?;
        let mut outcome = protocol_suite(&spec, tol)?;
        outcome.name = format!("gate-teleportation-random-{i}");
        suites.push(outcome);
    }

    suites.push(compositionality_suite::<Complex64>(tol, &mut rng, 20)?);
    Ok(suites)
}

/// Applying one fixed correction to every branch must break all branches
/// except the matching one; the suite passes when the verifier reports
/// exactly that failure.
fn wrong_correction_control(tol: f64) -> Result<SuiteOutcome, String> {
    let spec = teleportation_variant(CorrectionMode::Fixed(1));
    let report =
        protocols::verify::<Complex64>(&spec, tol).map_err(|e| format!("{}: {e}", spec.name))?;
    let failed = report.branches.iter().filter(|b| !b.pass).count();
    let pass = !report.pass && failed == report.branches.len() - 1;
    Ok(SuiteOutcome {
        name: "teleportation-wrong-correction-control".into(),
        pass,
        text: format!("{failed}/{} branches fail as they must", report.branches.len()),
        detail: report.to_json(),
    })
}

fn rel_suites(tol: f64, seed: u64) -> Result<Vec<SuiteOutcome>, String> {
    let mut rng = gen::rng(seed);
    Ok(vec![compositionality_suite::<bool>(tol, &mut rng, 20)?])
}

fn compositionality_suite<S: ScalarRing>(
    tol: f64,
    rng: &mut ChaCha8Rng,
    pairs: usize,
) -> Result<SuiteOutcome, String> {
    let mut failures = Vec::new();
    for i in 0..pairs {
        // Cycle the three dimensions through 1..=4 so small and rectangular
        // shapes all appear.
        let a = obj("A", 1 + i % 4);
        let b = obj("B", 1 + (i / 4) % 4);
        let c = obj("C", 1 + (i / 16) % 4);
        let f1 = gen::prim::<S>(rng, "f1", &a, &b);
        let f2 = gen::prim::<S>(rng, "f2", &b, &c);
        let ok = compositionality_check::<S>(&f1, &f2, tol)
            .map_err(|e| format!("compositionality pair {i}: {e}"))?;
        if !ok {
            failures.push(i);
        }
    }
    Ok(SuiteOutcome {
        name: "compositionality-random".into(),
        pass: failures.is_empty(),
        text: format!("{}/{pairs} pairs", pairs - failures.len()),
        detail: json!({ "pairs": pairs, "failed_pairs": failures }),
    })
}

fn obj(name: &str, dim: usize) -> ObjectType {
    if dim == 1 {
        ObjectType::Unit
    } else {
        ObjectType::base(name, dim)
    }
}
