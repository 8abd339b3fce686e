//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 failed check, 2 bad input, 3 empty post-selection.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cloning::{
    assemble_u, build_v, gram_discrepancy, oracle_cloning_unitary, permutation_chain_csv,
    verify_cloning_condition_with, CloneLabel, CloningTask, CLONE_TOLERANCE, GRAM_TOLERANCE,
};
use crate::ir::{parse_circuit, serialize_circuit};
use crate::linalg::text::format_real;
use crate::linalg::{SquareMatrix, StateVector, UNITARY_TOLERANCE};
use crate::simulator::{clone_experiment, postselect, run_circuit, Engine};
use crate::synthesis::{synthesize, ELEMENTARY_TOLERANCE};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INPUT_ERROR: u8 = 2;
pub const EXIT_EMPTY_POSTSELECTION: u8 = 3;

/// Unitarity budget for the assembled 64x64 unitary.
const U_UNITARITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "qclone", version, about = "Probabilistic cloning unitary: construction, verification and gate synthesis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the fixtures, the cloning condition and the success probabilities.
    Verify {
        /// Override every per-check tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Verify the oracle unitary only.
        #[arg(long)]
        skip_paper_u: bool,
        /// Emit one JSON object per check.
        #[arg(long)]
        json: bool,
    },
    /// Compile a unitary into CNOT and single-qubit gates.
    Synthesize {
        /// `paper-u`, `oracle-u` or a matrix file.
        source: Option<String>,
        /// Matrix file to compile.
        #[arg(long, conflicts_with = "source")]
        matrix: Option<PathBuf>,
        /// Circuit output path; stdout if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the JSON-lines stage report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Maximum accepted residual of the final circuit.
        #[arg(long, default_value_t = ELEMENTARY_TOLERANCE)]
        tolerance: f64,
        /// Print the stage report as JSON lines.
        #[arg(long)]
        json: bool,
    },
    /// Run a circuit on an input state.
    Simulate {
        circuit: PathBuf,
        /// `h1`, `h2`, `h3` or a state file.
        #[arg(long)]
        input: String,
        /// Post-select qubits on an outcome, e.g. `4,5=00`.
        #[arg(long)]
        postselect: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Dump a built-in matrix in the matrix text format.
    EmitMatrix {
        which: MatrixName,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dump the permutation chain of the assembled unitary as CSV.
    EmitPermutations,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MatrixName {
    U,
    V,
    OracleU,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT_ERROR,
            message: message.to_string(),
        }
    }

    fn check(message: impl ToString) -> Self {
        Failure {
            code: EXIT_CHECK_FAILED,
            message: message.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Runs a parsed command, writing normal output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Verify {
            tolerance,
            skip_paper_u,
            json,
        } => cmd_verify(tolerance, skip_paper_u, json, out),
        Command::Synthesize {
            source,
            matrix,
            output,
            report,
            tolerance,
            json,
        } => {
            let source = match (source, matrix) {
                (_, Some(path)) => Source::File(path),
                (Some(s), None) => Source::parse(&s),
                (None, None) => return Err(Failure::input("synthesize needs a source or --matrix")),
            };
            cmd_synthesize(source, output.as_deref(), report.as_deref(), tolerance, json, out)
        }
        Command::Simulate {
            circuit,
            input,
            postselect,
            json,
        } => cmd_simulate(&circuit, &input, postselect.as_deref(), json, out),
        Command::EmitMatrix { which, output } => {
            let m = match which {
                MatrixName::U => assemble_u(),
                MatrixName::V => build_v(),
                MatrixName::OracleU => oracle_u()?,
            };
            emit(output.as_deref(), &m.to_text(), out)
        }
        Command::EmitPermutations => emit(None, &permutation_chain_csv(), out),
    }
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => write_out(out, text),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> CmdResult {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::input(format!("write failed: {e}")))
}

fn oracle_u() -> Result<SquareMatrix, Failure> {
    oracle_cloning_unitary(&CloningTask::standard())
        .map(|u| u.into_inner())
        .map_err(|e| Failure::check(format!("oracle construction failed: {e}")))
}

#[derive(Debug, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub value: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn row(check: impl Into<String>, value: f64, deviation: f64, tolerance: f64) -> CheckRow {
    CheckRow {
        check: check.into(),
        value,
        deviation,
        tolerance,
        pass: deviation <= tolerance,
    }
}

/// Every check `verify` performs, in report order.
pub fn verify_rows(tolerance: Option<f64>, skip_paper_u: bool) -> Result<Vec<CheckRow>, Failure> {
    let tol = |default: f64| tolerance.unwrap_or(default);
    let task = CloningTask::standard();
    let mut rows = Vec::new();

    let v = build_v().unitarity_residual();
    rows.push(row("v unitarity", v, v, tol(UNITARY_TOLERANCE)));
    let (gram, _, _) = gram_discrepancy(&task);
    rows.push(row("gram", gram, gram, tol(GRAM_TOLERANCE)));

    let mut cloners = Vec::new();
    if !skip_paper_u {
        cloners.push(("u", assemble_u()));
    }
    cloners.push(("oracle", oracle_u()?));
    for (name, u) in &cloners {
        let r = u.unitarity_residual();
        let limit = if *name == "u" { U_UNITARITY_TOLERANCE } else { UNITARY_TOLERANCE };
        rows.push(row(format!("{name} unitarity"), r, r, tol(limit)));
        let verdict = verify_cloning_condition_with(u, &task, tol(CLONE_TOLERANCE)).map_err(Failure::check)?;
        for label in CloneLabel::ALL {
            let r = verdict.residuals[label.index()];
            rows.push(row(format!("{name} clone {label}"), r, r, tol(CLONE_TOLERANCE)));
        }
    }

    let (_, engine_u) = &cloners[0];
    for label in CloneLabel::ALL {
        let r = clone_experiment(label, Engine::Matrix(engine_u)).map_err(Failure::check)?;
        let gamma = task.gammas[label.index()];
        let p = r.success_probability;
        rows.push(row(format!("{label} success"), p, (p - gamma).abs(), tol(CLONE_TOLERANCE)));
        let f = r.clone_fidelity;
        rows.push(row(format!("{label} fidelity"), f, (1.0 - f).abs(), tol(CLONE_TOLERANCE)));
        let w = r.failure_ab_ground_weight;
        rows.push(row(format!("{label} failure-ab"), w, (1.0 - w).abs(), tol(CLONE_TOLERANCE)));
    }
    Ok(rows)
}

fn cmd_verify(tolerance: Option<f64>, skip_paper_u: bool, json: bool, out: &mut dyn Write) -> CmdResult {
    if let Some(t) = tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure::input(format!("invalid tolerance {t}")));
        }
    }
    let rows = verify_rows(tolerance, skip_paper_u)?;
    let mut text = String::new();
    for r in &rows {
        if json {
            text += &serde_json::to_string(r).expect("plain struct");
        } else {
            text += &format!(
                "{} {} deviation {} tolerance {} {}",
                r.check,
                format_real(r.value),
                format_real(r.deviation),
                format_real(r.tolerance),
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
        text.push('\n');
    }
    write_out(out, &text)?;
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::check(format!("failed checks: {}", failed.join(", "))))
    }
}

enum Source {
    Assembled,
    OracleU,
    File(PathBuf),
}

impl Source {
    fn parse(s: &str) -> Source {
        match s {
            "paper-u" => Source::Assembled,
            "oracle-u" => Source::OracleU,
            path => Source::File(path.into()),
        }
    }

    fn load(&self) -> Result<SquareMatrix, Failure> {
        match self {
            Source::Assembled => Ok(assemble_u()),
            Source::OracleU => oracle_u(),
            Source::File(p) => {
                let text = fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
                SquareMatrix::parse_text(&text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))
            }
        }
    }
}

fn cmd_synthesize(
    source: Source,
    output: Option<&Path>,
    report: Option<&Path>,
    tolerance: f64,
    json: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let u = source.load()?;
    let residual = u.unitarity_residual();
    if residual > UNITARY_TOLERANCE {
        return Err(Failure::input(format!(
            "input is not unitary: unitarity residual {} exceeds {}",
            format_real(residual),
            format_real(UNITARY_TOLERANCE)
        )));
    }
    let s = synthesize(&u).map_err(Failure::input)?;
    let circuit_text = serialize_circuit(&s.circuit).map_err(Failure::check)?;

    let mut jsonl = String::new();
    for stage in &s.stages {
        jsonl += &serde_json::to_string(stage).expect("plain struct");
        jsonl.push('\n');
    }
    jsonl += &json!({ "stage": "summary", "report": s.report }).to_string();
    jsonl.push('\n');
    if let Some(p) = report {
        fs::write(p, &jsonl).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
    }

    let summary = if json {
        jsonl
    } else {
        let mut t: String = s
            .stages
            .iter()
            .map(|st| format!("{} count {} residual {}\n", st.stage, st.count, format_real(st.residual)))
            .collect();
        t += &format!(
            "cnots {} single-qubit {}\n",
            s.report.cnot_count, s.report.single_qubit_count
        );
        t
    };
    match output {
        Some(p) => {
            fs::write(p, &circuit_text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            write_out(out, &summary)?;
        }
        None => {
            write_out(out, &circuit_text)?;
            eprint!("{summary}");
        }
    }

    let last = s.stages.last().map_or(0.0, |st| st.residual);
    if last > tolerance {
        return Err(Failure::check(format!(
            "synthesized circuit residual {} exceeds {}",
            format_real(last),
            format_real(tolerance)
        )));
    }
    Ok(())
}

/// Parses `q,q,..=bits`, e.g. `4,5=00`.
fn parse_postselect(spec: &str) -> Result<(Vec<usize>, Vec<u8>), Failure> {
    let bad = || Failure::input(format!("invalid post-selection '{spec}', expected e.g. 4,5=00"));
    let (qs, bits) = spec.split_once('=').ok_or_else(bad)?;
    let qubits = qs
        .split(',')
        .map(|q| q.trim().trim_start_matches('q').parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    let outcome = bits
        .trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(bad()),
        })
        .collect::<Result<Vec<u8>, _>>()?;
    if qubits.len() != outcome.len() {
        return Err(bad());
    }
    Ok((qubits, outcome))
}

fn load_input(input: &str) -> Result<StateVector, Failure> {
    if let Ok(label) = input.parse::<CloneLabel>() {
        return Ok(CloningTask::standard().input(label));
    }
    let text = fs::read_to_string(input).map_err(|e| Failure::input(format!("{input}: {e}")))?;
    StateVector::parse_text(&text).map_err(|e| Failure::input(format!("{input}: {e}")))
}

fn state_json(psi: &StateVector) -> serde_json::Value {
    psi.amplitudes().iter().map(|z| json!([z.re, z.im])).collect()
}

fn cmd_simulate(circuit: &Path, input: &str, post: Option<&str>, json: bool, out: &mut dyn Write) -> CmdResult {
    let text = fs::read_to_string(circuit).map_err(|e| Failure::input(format!("{}: {e}", circuit.display())))?;
    let c = parse_circuit(&text).map_err(|e| Failure::input(format!("{}: {e}", circuit.display())))?;
    let psi0 = load_input(input)?;
    let psi = run_circuit(&c, &psi0).map_err(Failure::input)?;

    let Some(spec) = post else {
        let text = if json {
            json!({ "state": state_json(&psi) }).to_string() + "\n"
        } else {
            psi.to_text()
        };
        return write_out(out, &text);
    };
    let (qubits, outcome) = parse_postselect(spec)?;
    let (p, state) = postselect(&psi, &qubits, &outcome).map_err(Failure::input)?;
    let Some(state) = state else {
        return Err(Failure {
            code: EXIT_EMPTY_POSTSELECTION,
            message: format!("post-selection {spec} has zero probability ({})", format_real(p)),
        });
    };
    let text = if json {
        json!({ "probability": p, "state": state_json(&state) }).to_string() + "\n"
    } else {
        format!("probability {}\n{}", format_real(p), state.to_text())
    };
    write_out(out, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn postselect_spec() {
        assert_eq!(parse_postselect("4,5=00").unwrap(), (vec![4, 5], vec![0, 0]));
        assert_eq!(parse_postselect("q4,q5=10").unwrap(), (vec![4, 5], vec![1, 0]));
        assert!(parse_postselect("4,5=0").is_err());
        assert!(parse_postselect("4,5").is_err());
        assert!(parse_postselect("a=1").is_err());
        assert!(parse_postselect("4=2").is_err());
    }

    #[test]
    fn default_verification_passes() {
        let rows = verify_rows(None, false).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
        let h1 = rows.iter().find(|r| r.check == "h1 success").unwrap();
        assert!((h1.value - 1.0 / 7.0).abs() < 1e-12);
    }
}
