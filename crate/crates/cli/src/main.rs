//! `h10`: reports for the exact checks and the reduction compiler.
//!
//! Exit status is 0 iff every check performed passed, 1 if a check failed,
//! and 2 on a usage error, a cap violation or a library error.

mod commands;
mod report;
mod sample;

use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use h10_core::reducer::{parse_zpoly, ZPolynomial};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded { what: String, value: i64, cap: i64 },
    #[error("{0}")]
    Usage(String),
    #[error("malformed witness: {0}")]
    Witness(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] h10_core::Error),
}

macro_rules! core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

core_error!(
    h10_core::algebra::AlgebraError,
    h10_core::elliptic::EllipticError,
    h10_core::denef::DenefError,
    h10_core::kimroush::KrError,
    h10_core::reducer::ReduceError
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "h10", version, about = "Exact checks for diophantine models of ℤ in function fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format: text lines, or one JSON object per line.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Curve {
    /// Coefficient `a` of `y² = x³ + ax + b`, a rational.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    a: String,
    /// Coefficient `b` of `y² = x³ + ax + b`, a rational.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    b: String,
}

#[derive(Debug, Args)]
struct Input {
    /// The polynomial, e.g. `x^2 + y^2 - 25`.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    poly: Option<String>,
    /// Read the polynomial from a file.
    #[arg(long, short)]
    file: Option<PathBuf>,
    /// Also fold the system into a single equation.
    #[arg(long)]
    fold: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// `Zₙ` and its value at infinity.
    Zn {
        #[command(flatten)]
        curve: Curve,
        /// Check `-bound..=bound`.
        #[arg(long, conflicts_with = "nr_range")]
        bound: Option<i64>,
        /// Range of `n`, as `a..b` (inclusive) or a single integer. Default `-3..3`.
        #[arg(long, allow_hyphen_values = true)]
        nr_range: Option<String>,
    },
    /// Truth table of the multiplication encoding.
    MultTable {
        #[command(flatten)]
        curve: Curve,
        /// `|n|, |m| ≤ bound` and `|ℓ| ≤ bound²`; at most 5.
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },
    /// `Pₙ ⊕ Pₘ = Pₙ₊ₘ` and the value of `Zₙ₊ₘ` at infinity.
    AddCheck {
        #[command(flatten)]
        curve: Curve,
        /// `|n|, |m| ≤ bound`; at most 12.
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// The valuation grid over ℚ(t₁, t₂) and the divisor counts for `s ∈ {1, 2}`.
    KrClaims {
        /// Range of `m`. Default `0..2`.
        #[arg(long, allow_hyphen_values = true, default_value = "0..2")]
        m_range: String,
        /// Range of `n` and `r`. Default `-3..3`.
        #[arg(long, allow_hyphen_values = true, default_value = "-3..3")]
        nr_range: String,
    },
    /// Compile a polynomial equation into a system over ℚ(t).
    Reduce {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        curve: Curve,
    },
    /// Build a witness from integer assignments and check the system.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        curve: Curve,
        /// JSON object of integer assignments, e.g. `{"x": 2}`.
        #[arg(long)]
        witness: PathBuf,
    },
    /// A fast pass over every family of checks.
    Selftest {
        /// Seed for the sampled checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// `a..b` inclusive, `a..=b`, or a single integer. `b < a` is empty.
fn parse_range(s: &str) -> Result<RangeInclusive<i64>, CliError> {
    let bad = || CliError::Usage(format!("`{s}` is not a range like -3..3"));
    let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => Ok(int(a)?..=int(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = int(s)?;
            Ok(n..=n)
        }
    }
}

fn read_input(input: &Input) -> Result<ZPolynomial, CliError> {
    let text = match (&input.poly, &input.file) {
        (Some(p), _) => p.clone(),
        (None, Some(f)) => fs::read_to_string(f)?,
        (None, None) => return Err(CliError::Usage("no polynomial given".into())),
    };
    Ok(parse_zpoly(text.trim())?)
}

/// The rendered output and whether every check passed.
fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    let json = cli.format == Format::Json;
    let rendered = |r: report::Report| (r.render(json), r.passed());
    Ok(match &cli.command {
        Command::Zn { curve, bound, nr_range } => {
            let range = match (bound, nr_range) {
                (Some(b), _) => -b..=*b,
                (None, Some(r)) => parse_range(r)?,
                (None, None) => -3..=3,
            };
            rendered(commands::zn(&commands::denef_context(&curve.a, &curve.b)?, range)?)
        }
        Command::MultTable { curve, bound } => rendered(commands::mult_table(&commands::denef_context(&curve.a, &curve.b)?, *bound)?),
        Command::AddCheck { curve, bound } => rendered(commands::add_check(&commands::denef_context(&curve.a, &curve.b)?, *bound)?),
        Command::KrClaims { m_range, nr_range } => rendered(commands::kr_claims(parse_range(m_range)?, parse_range(nr_range)?)?),
        Command::Reduce { input, curve } => {
            let r = commands::reducer(commands::denef_context(&curve.a, &curve.b)?)?;
            (commands::reduce(&r, &read_input(input)?, input.fold, json)?, true)
        }
        Command::Verify { input, curve, witness } => {
            let f = read_input(input)?;
            let sigma = commands::parse_witness(&fs::read_to_string(witness)?, &f)?;
            let r = commands::reducer(commands::denef_context(&curve.a, &curve.b)?)?;
            rendered(commands::verify(&r, &f, &sigma, input.fold)?)
        }
        Command::Selftest { seed } => rendered(commands::selftest(*seed)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
