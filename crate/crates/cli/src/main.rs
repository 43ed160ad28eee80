//! `moricone`: exact cone computations on blown-up surfaces from the shell.
//!
//! Exit codes: 0 success, 1 malformed input, 2 mathematically infeasible
//! input, 3 a check or certificate failed.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use moricone::Rational;

#[derive(Debug, Parser)]
#[command(name = "moricone", version, about = "Exact lattice and cone computations on blown-up surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Surface document (JSON).
    #[arg(long, global = true, conflicts_with = "fixture")]
    pub input: Option<PathBuf>,

    /// Bundled surface instead of --input (p2-r9, p2-r10, p2-r11, p2-r12, p2-r17, k3, abelian, enriques).
    #[arg(long, global = true)]
    pub fixture: Option<String>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Sample count; each command has its own default.
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Overrides the list bound ν.
    #[arg(long, global = true)]
    pub nu: Option<i64>,

    /// Overrides the list bound π.
    #[arg(long, global = true)]
    pub pi: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List bounds, conditions on r, threshold, sampled containment check, strict inclusion.
    Analyze,
    /// The thresholds s_1, …, s_ν and the conditions on r.
    Thresholds,
    /// Ray-containment certificates for every listed curve at s = s_ν.
    CertifyRay {
        /// Cap on the ample perturbation δ. Certificates built with a
        /// non-default cap are marked non-certified on stderr.
        #[arg(long, env = "MORICONE_DELTA_CAP")]
        delta_cap: Option<Rational>,
    },
    /// Zariski decomposition of --divisor, or a sampled check of the curve list.
    Zariski {
        /// Coordinates of D, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        divisor: Option<Vec<Rational>>,
    },
    /// Speciality, pencil and curve-bound verdicts.
    SegreCheck,
    /// Witnesses for Pos ⊊ NE on the half-space K ≥ 0.
    StrictInclusion,
    /// CSV projection of the listed curves and L into a slice of the positive cone.
    Slice {
        /// Plane normal, comma separated (default L).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        normal: Option<Vec<Rational>>,
    },
    /// Re-checks one certificate or an array of them.
    Verify {
        /// Certificate file (alternatively --input).
        certificate: Option<PathBuf>,
    },
}

/// What a command produced.
pub struct Outcome {
    pub body: String,
    pub code: u8,
    pub message: Option<String>,
}

impl Outcome {
    pub fn ok(body: String) -> Outcome {
        Outcome { body, code: 0, message: None }
    }

    pub fn with_status(body: String, code: u8, message: impl Into<String>) -> Outcome {
        Outcome {
            body,
            code,
            message: Some(message.into()),
        }
    }
}

/// A failure that produced no report.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }

    pub fn infeasible(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    pub fn check(message: impl Into<String>) -> Failure {
        Failure { code: 3, message: message.into() }
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved for infeasibility here
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match commands::run(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    if let Err(e) = emit(cli.output.as_deref(), &outcome.body) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return ExitCode::from(outcome.code);
        }
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if let Some(m) = &outcome.message {
        eprintln!("{m}");
    }
    ExitCode::from(outcome.code)
}

fn emit(path: Option<&std::path::Path>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}
