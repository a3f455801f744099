mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use clifford_core::sharpness::Parity;
use clifford_core::{BiDegree, Rational, Suite, DEFAULT_SEED};

pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_GENERICITY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "clifford", version, about = "Clifford-type section bounds for sheaves on P1 x P1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub reproducible: bool,

    /// Worker threads for parallel suites (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    General,
    Unbalanced,
    Stratified,
    NonGg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Any,
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Parity {
        match p {
            ParityArg::Any => Parity::Any,
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

fn parse_bidegree(s: &str) -> Result<BiDegree, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad integer `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad integer `{b}`"))?;
    Ok(BiDegree::new(a, b))
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e| format!("malformed rational `{s}`: {e}"))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: clifford_core::Error| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one of the h0 bounds.
    Bound {
        #[arg(long, value_enum, default_value_t = BoundKind::General)]
        kind: BoundKind,
        /// Rank r (the rank s of the generated part for `stratified`).
        #[arg(long, allow_hyphen_values = true)]
        rank: i64,
        /// First Chern class; the slope is taken from it unless --mu is given.
        #[arg(long, value_parser = parse_bidegree, allow_hyphen_values = true)]
        c1: Option<BiDegree>,
        /// Maximal slope as p/q.
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        mu: Option<Rational>,
        /// Twist index for `unbalanced`.
        #[arg(long, allow_hyphen_values = true)]
        j: Option<i64>,
    },
    /// Decide the Brill-Noether locus B^k for a character.
    Bn {
        #[arg(long, allow_hyphen_values = true)]
        rank: i64,
        #[arg(long, value_parser = parse_bidegree, allow_hyphen_values = true)]
        c1: BiDegree,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Sample a Steiner-like cokernel and audit its h0 against the bounds.
    Steiner {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// h0 of a twisted ideal sheaf of points, from a file or seeded random points.
    Ideal {
        #[arg(long, conflicts_with = "random_points", required_unless_present = "random_points")]
        points: Option<PathBuf>,
        #[arg(long)]
        random_points: Option<usize>,
        #[arg(long, value_parser = parse_bidegree, allow_hyphen_values = true)]
        twist: BiDegree,
    },
    /// Run verification suites; exits 1 if any check fails.
    Sweep {
        #[arg(long, value_parser = parse_suite, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        #[arg(long, default_value_t = 3)]
        max_rank: i64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Enumerate characters meeting every sharpness condition.
    SharpnessSearch {
        #[arg(long)]
        max_k: i64,
        #[arg(long)]
        max_rank: i64,
        #[arg(long)]
        max_c1: i64,
        #[arg(long, allow_hyphen_values = true)]
        chi_threshold: i64,
        /// Lower end of the chi(Q) enumeration.
        #[arg(long, allow_hyphen_values = true, default_value_t = -10)]
        min_chi: i64,
        #[arg(long, value_enum, default_value_t = ParityArg::Any)]
        s_rank_parity: ParityArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = output::emit(&cli, &outcome) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                clifford_core::Error::NonGenericSample { .. } => EXIT_GENERICITY,
                _ => EXIT_USAGE,
            })
        }
    }
}
