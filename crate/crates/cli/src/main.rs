//! `corolla` — compute, verify, generate, and evaluate corolla polynomials
//! of half-edge graphs.
//!
//! Four subcommands:
//!
//! * `compute` — one graph JSON file in, one canonical polynomial out;
//! * `verify`  — run identity suites over a corpus and report per-graph
//!   pass/fail/skipped records;
//! * `gen`     — emit fixtures, exhaustively enumerated small graphs, or
//!   seeded random graphs as JSON files;
//! * `eval`    — evaluate a polynomial exactly at rational points.
//!
//! Exit codes: 0 success, 1 identity-check failure, 2 invalid input or
//! flags, 3 method/graph mismatch or missing evaluation assignments. All
//! output is byte-deterministic for fixed inputs and flags; the env var
//! `COROLLA_THREADS` caps the verification worker pool.

mod compute;
mod corpus;
mod eval;
mod gen;
mod verify;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "corolla",
    version,
    about = "Corolla polynomials of half-edge graphs: compute, verify, generate, evaluate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a corolla polynomial from a graph JSON file.
    Compute(compute::ComputeArgs),
    /// Run identity-verification suites over a graph corpus.
    Verify(verify::VerifyArgs),
    /// Write fixture, enumerated, or random graphs as JSON files.
    Gen(gen::GenArgs),
    /// Evaluate a polynomial exactly at rational points.
    Eval(eval::EvalArgs),
}

/// An error that terminates the process with a contractual exit code:
/// 1 identity failure, 2 invalid input or flags, 3 method/graph mismatch
/// or missing assignments.
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    /// Exit 2: unreadable or malformed input, bad flag values.
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    /// Exit 3: the requested operation does not apply to this graph, or an
    /// evaluation point is incomplete.
    pub fn mismatch(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }

    /// Exit 1: at least one identity check failed.
    pub fn failed(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }
}

/// Prints one line to stdout. A broken pipe means the consumer stopped
/// reading; terminate quietly instead of panicking.
pub fn emit(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(err) = writeln!(out, "{line}") {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {err}");
        std::process::exit(2);
    }
}

fn main() {
    // Parse explicitly so usage errors exit 2 (help and version exit 0),
    // independent of clap defaults.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Compute(args) => compute::run(args),
        Command::Verify(args) => verify::run(args),
        Command::Gen(args) => gen::run(args),
        Command::Eval(args) => eval::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {}", err.message);
        std::process::exit(err.code);
    }
}
