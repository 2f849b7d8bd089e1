use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use szego_core::Parity;

#[derive(Debug, Parser)]
#[command(
    name = "szego",
    version,
    about = "Elliptic quadratic Poisson brackets from Szegő kernels"
)]
pub struct Cli {
    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Directory that receives artifacts and reports.
    #[arg(long, global = true, env = "SZEGO_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build bracket tensors.
    #[command(subcommand)]
    Bracket(BracketCmd),
    /// Certify tensors and families.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Pointwise rank statistics.
    #[command(subcommand)]
    Rank(RankCmd),
    /// Szegő kernel residues.
    #[command(subcommand)]
    Szego(SzegoCmd),
    /// Helix classes and bihamiltonian parameters.
    Helix(HelixArgs),
}

#[derive(Debug, Subcommand)]
pub enum BracketCmd {
    /// Tensor of a single curve.
    Build {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        build: BuildArgs,
        /// Output file, relative to the output directory.
        #[arg(long, default_value = "tensor.json")]
        out: PathBuf,
    },
    /// The nine-member family basis.
    Family {
        #[arg(long)]
        parity: Parity,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long, default_value = "family.json")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Jacobi identity in every chart.
    Jacobi {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Pairwise compatibility of a family.
    Compat {
        #[arg(long)]
        family: PathBuf,
    },
    /// Rank of the family basis over the rationals.
    Independence {
        #[arg(long)]
        family: PathBuf,
    },
    /// Affine linearity of the construction in the curve coefficients.
    Linearity {
        #[arg(long)]
        parity: Parity,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        sampling: SamplingArgs<5>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RankCmd {
    /// Rank at seeded random points, plus pencil drop scans.
    Scan {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        sampling: SamplingArgs<50>,
        #[arg(long, default_value_t = szego_core::verify::DEFAULT_PENCILS)]
        pencils: usize,
        /// Fail unless the generic rank equals this value.
        #[arg(long)]
        expect_rank: Option<usize>,
        /// Histogram CSV, relative to the output directory.
        #[arg(long, default_value = "rank-histogram.csv")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum SzegoCmd {
    /// Diagonal and infinity residues of the kernel.
    Check {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value = "szego.json")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct HelixArgs {
    #[command(subcommand)]
    pub command: Option<HelixCmd>,
    /// Inclusive range `from..to` of helix indices.
    #[arg(long, allow_hyphen_values = true, default_value = "-5..5")]
    pub range: String,
    /// Also write the table as JSON rows, relative to the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum HelixCmd {
    /// Solve `d = (2k−1)r ± 1` or `d = (2k−2)r ± 1` for the biham parameters.
    Solve {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u64,
    },
}

/// Curve coefficients as ascending comma-separated rationals.
#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub parity: Parity,
    /// Section degree index; not needed by `szego check`.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(
        long = "Q",
        value_name = "COEFFS",
        allow_hyphen_values = true,
        conflicts_with = "a0"
    )]
    pub q: Option<String>,
    #[arg(
        long = "P",
        value_name = "COEFFS",
        allow_hyphen_values = true,
        conflicts_with = "a0"
    )]
    pub p: Option<String>,
    /// Shift in `L = t + c` (odd family only).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "a0")]
    pub c: Option<String>,
    /// Shorthand for `Q = 0`, `P = a0`, `c = 0`.
    #[arg(long, allow_hyphen_values = true)]
    pub a0: Option<String>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BuildArgs {
    /// Use the opposite global sign.
    #[arg(long)]
    pub sign_flip: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SamplingArgs<const N: usize> {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = N)]
    pub samples: usize,
}
