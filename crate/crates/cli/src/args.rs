use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ldpost::DiscrepancyKind;

/// Thread count for parallel evaluation. Unset means one per core.
pub const THREADS_ENV: &str = "LDPOST_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "ldpost",
    version,
    about = "Low-discrepancy point sets: generate, evaluate, optimize"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a classical point set.
    Generate(GenerateArgs),
    /// Print discrepancies of a point-set file as JSON.
    Evaluate(EvaluateArgs),
    /// Run projected ADAM descent on a point-set file.
    Optimize(OptimizeArgs),
    /// Recompute a published table or figure and compare.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub generator: Generator,
    /// Output file; stdout when omitted. A `.meta.json` sidecar is written next to it.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Generator {
    /// `(i/n, {i φ})`.
    Fibonacci {
        #[arg(long)]
        n: usize,
    },
    /// Kronecker lattice `(i/n, {i α})`.
    Lattice {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
        alpha: f64,
    },
    /// Rank-1 lattice with `F_k` points and generator `(1, F_{k-1})`.
    IntegrationLattice {
        #[arg(long)]
        k: u32,
    },
    /// Unscrambled Sobol' prefix.
    Sobol {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        skip: u64,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Independent uniform coordinates.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Debug, Default, Args)]
pub struct TableArgs {
    /// Direction numbers in the Joe–Kuo text format.
    #[arg(long, conflicts_with = "table")]
    pub direction_table: Option<PathBuf>,
    /// Built-in direction-number table.
    #[arg(long, value_enum)]
    pub table: Option<BuiltinTable>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinTable {
    JoeKuo,
    BratleyFox,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    pub input: PathBuf,
    /// Kinds to evaluate; repeat or separate with commas. Defaults to all.
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    pub kind: Vec<DiscrepancyKind>,
    /// Upper limit on critical-grid boxes for the L∞ kind.
    #[arg(long, default_value_t = ldpost::DEFAULT_BOX_BUDGET)]
    pub budget: u128,
    #[arg(long)]
    pub no_prune: bool,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Starting point set.
    #[arg(long, visible_alias = "init-file")]
    pub input: PathBuf,
    /// Output prefix: writes `<prefix>.txt`, `<prefix>.trajectory.csv` and `<prefix>.meta.json`.
    #[arg(short, long, default_value = "optimized")]
    pub output: PathBuf,
    #[arg(long, default_value = "l2-star", value_parser = parse_kind)]
    pub kind: DiscrepancyKind,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Learning rate; 5e-4 below 100 points and 1e-4 otherwise when omitted.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1e-15)]
    pub tau: f64,
    /// Track the exact L∞ star discrepancy and keep the best iterate.
    #[arg(long)]
    pub track_linf: bool,
    /// Tracking interval; every step in the plane and every tenth otherwise by default.
    #[arg(long, requires = "track_linf")]
    pub track_every: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0.1)]
    pub restart_fraction: f64,
    /// Seed of the restart perturbations.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_parser = parse_target)]
    pub target: crate::reproduce::Target,
    /// Directory receiving `<target>.csv` and `<target>.check.csv`.
    #[arg(long, default_value = "reproduce-out")]
    pub out_dir: PathBuf,
    /// Restrict to these point counts.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Upper limit on critical-grid boxes per L∞ evaluation; larger cells are skipped.
    #[arg(long, default_value_t = ldpost::DEFAULT_BOX_BUDGET)]
    pub budget: u128,
    #[command(flatten)]
    pub table: TableArgs,
    /// Third-party starting sets as `N=PATH`, used for the subset columns.
    #[arg(long, value_parser = parse_init_file)]
    pub init_file: Vec<(usize, PathBuf)>,
    /// Largest point count of a sweep.
    #[arg(long, default_value_t = 1020)]
    pub n_max: usize,
    #[arg(long, default_value_t = 20)]
    pub n_step: usize,
    /// Restart count or number of random sets, where the target uses one.
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_kind(s: &str) -> Result<DiscrepancyKind, String> {
    s.parse()
}

fn parse_target(s: &str) -> Result<crate::reproduce::Target, String> {
    s.parse()
}

fn parse_init_file(s: &str) -> Result<(usize, PathBuf), String> {
    let (n, path) = s
        .split_once('=')
        .ok_or_else(|| format!("expected N=PATH, got {s:?}"))?;
    let n = n
        .trim()
        .parse()
        .map_err(|e| format!("bad point count {n:?}: {e}"))?;
    Ok((n, PathBuf::from(path)))
}
