//! `eqlf`: build and verify equiangular line sets from concatenated
//! modified MUBs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid parameters or
//! unreadable input.

mod commands;
mod scalar;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eqlf_core::Kind;

#[derive(Debug, Parser)]
#[command(name = "eqlf", version, about = "Equiangular lines from concatenated modified MUBs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate and check a bundled MUB set.
    MubGen(MubGenArgs),
    /// Build a line set and verify it.
    LinesGen(LinesGenArgs),
    /// Verify a saved line set (JSON or .csv) or MUB set.
    LinesCheck(LinesCheckArgs),
    /// Double the 8 real lines in R^8 (d = 4, t = 1, a = 1 ± sqrt(2)) to 16.
    ExtendR8(ExtendArgs),
    /// Print counts, cosine and bounds without constructing anything.
    Info(InfoArgs),
}

#[derive(Debug, Args)]
struct Tolerance {
    /// Verification tolerance [env: EQLF_TOL].
    #[arg(long, env = "EQLF_TOL", hide_env = true)]
    tol: Option<f64>,
    /// Print the maximum deviation of every check.
    #[arg(long)]
    precision: bool,
}

#[derive(Debug, Args)]
struct MubGenArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: Kind,
    #[arg(long)]
    dim: usize,
    /// Output file; JSON goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: Tolerance,
}

#[derive(Debug, Args)]
struct LinesGenArgs {
    /// MUB dimension d; taken from --mubs when omitted there.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    t: usize,
    /// Defaults to complex, or to the kind of --mubs.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<Kind>,
    /// Comma-separated scalars a_1..a_t, e.g. "1+sqrt(2)" or "0.5-2i".
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Option<Vec<String>>,
    /// Comma-separated positive block scalings c_1..c_t.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    c: Option<Vec<String>>,
    /// MUB set file to use instead of a bundled construction.
    #[arg(long)]
    mubs: Option<PathBuf>,
    /// Output file; a .csv extension selects CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: Tolerance,
}

#[derive(Debug, Args)]
struct LinesCheckArgs {
    path: PathBuf,
    #[command(flatten)]
    tol: Tolerance,
}

#[derive(Debug, Args)]
struct ExtendArgs {
    path: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    tol: Tolerance,
}

#[derive(Debug, Args)]
struct InfoArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, value_parser = parse_kind, default_value = "complex")]
    kind: Kind,
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse()
}

/// Why a command stopped early.
#[derive(Debug)]
pub enum Failure {
    /// Bad parameters or input; exit 2.
    Invalid(String),
    /// A verifier rejected the data; exit 1.
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Verification(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::MubGen(a) => commands::mub_gen(a.kind, a.dim, a.out.as_deref(), a.tol.tol, a.tol.precision),
        Command::LinesGen(a) => commands::lines_gen(commands::LinesGen {
            dim: a.dim,
            t: a.t,
            kind: a.kind,
            a: a.a,
            c: a.c,
            mubs: a.mubs,
            out: a.out,
            tol: a.tol.tol,
            precision: a.tol.precision,
        }),
        Command::LinesCheck(a) => commands::lines_check(&a.path, a.tol.tol, a.tol.precision),
        Command::ExtendR8(a) => commands::extend(&a.path, &a.out, a.tol.tol, a.tol.precision),
        Command::Info(a) => commands::info(a.dim, a.t, a.kind),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err((text, failure)) => {
            print!("{text}");
            let msg = match &failure {
                Failure::Invalid(m) | Failure::Verification(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(failure.code())
        }
    }
}
