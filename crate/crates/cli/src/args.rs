use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use seqspace::Exponent;

#[derive(Debug, Parser)]
#[command(
    name = "seqspace",
    version,
    about = "Spaceability constructions and certificates for computable sequence spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Construct,
    Certify,
    Axioms,
    Catalog,
    Attain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a basis from the cataloged witness and certify its combinations
    Construct(RunArgs),
    /// Certify membership and avoidance of the cataloged witness alone
    Certify(RunArgs),
    /// Check the invariant-space axioms on seeded samples
    Axioms(RunArgs),
    /// List the witness catalog, or look up one (space, avoid) pair
    Catalog(RunArgs),
    /// Build a norm-attaining family and check where it attains its norm
    Attain(RunArgs),
}

impl Command {
    pub fn split(self) -> (CommandKind, RunArgs) {
        match self {
            Command::Construct(a) => (CommandKind::Construct, a),
            Command::Certify(a) => (CommandKind::Certify, a),
            Command::Axioms(a) => (CommandKind::Axioms, a),
            Command::Catalog(a) => (CommandKind::Catalog, a),
            Command::Attain(a) => (CommandKind::Attain, a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Lp,
    Lorentz,
    Orlicz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AvoidArg {
    /// The union of l_q over the exponents given by --gamma
    Lq,
    C0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

fn exponent(s: &str) -> Result<Exponent, String> {
    s.parse().map_err(|e: seqspace::Error| e.to_string())
}

/// Every flag of every command; each command reads the ones it needs.
#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunArgs {
    /// Sequence-space family of the home space
    #[arg(long, value_enum, default_value = "lp")]
    pub family: FamilyArg,
    /// First exponent: p of l_p or of l_{p,q} (accepts inf and fractions like 1/2)
    #[arg(long, value_parser = exponent)]
    pub p: Option<Exponent>,
    /// Second exponent: q of l_{p,q}, or the target exponent of attain
    #[arg(long, value_parser = exponent)]
    pub q: Option<Exponent>,
    /// Orlicz function: linear, square, t^P or tlog:C
    #[arg(long)]
    pub orlicz_id: Option<String>,
    /// Comma-separated exponents to avoid
    #[arg(long, value_delimiter = ',', value_parser = exponent)]
    pub gamma: Vec<Exponent>,
    /// Avoidance set; defaults to lq when --gamma is given
    #[arg(long, value_enum)]
    pub avoid: Option<AvoidArg>,
    /// Basis size
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    /// Truncation depth N
    #[arg(long, default_value_t = 100_000)]
    pub depth: u64,
    /// Divergence threshold T
    #[arg(long, default_value_t = 1e3)]
    pub threshold: f64,
    /// Cap on the divergence search depth
    #[arg(long, default_value_t = 100_000_000)]
    pub n_max: u64,
    /// Relative tolerance of the Luxemburg bisection
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seeded random coefficient vectors added to the construct battery
    #[arg(long, default_value_t = 3)]
    pub random: usize,
    /// Sample count: axiom samples (default 20) or sphere samples (default 10000)
    #[arg(long)]
    pub samples: Option<u64>,
    /// Domain dimension for attain
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    /// Domain norm exponent for attain
    #[arg(long, value_parser = exponent, default_value = "2")]
    pub r: Exponent,
    /// Coefficients of T(a) for attain
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0])]
    pub a: Vec<f64>,
    /// Output vector w of the rank-one operator for attain
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.0])]
    pub w: Vec<f64>,
    /// Attainment point; a seeded unit vector when absent
    #[arg(long, value_delimiter = ',')]
    pub x0: Option<Vec<f64>>,
    /// Use the closed-form operator norm instead of sphere sampling
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; standard output when absent
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}
