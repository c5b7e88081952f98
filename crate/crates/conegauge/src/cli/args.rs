use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "conegauge", version, about = "Projections, exposed faces and Hölderian error bounds for p-cones")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Overrides the command's numerical tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project a point onto K_p and report the Moreau split.
    Project(ProjectArgs),
    /// Exposed face, exponent α_z and ray residual function of a dual vector.
    Exponent(ExponentArgs),
    /// Witness curves: log-log slope, (G1) limsup and γ̂.
    Tightness(TightnessArgs),
    /// Monte Carlo γ̂ with a held-out check of the error bound.
    Gamma(GammaArgs),
    /// Verify a facial-reduction chain and assemble the exponent.
    Chain(ChainArgs),
    /// KL exponent 1 − min{1/2, 1/p}^d.
    Kl(KlArgs),
    /// Proximal gradient on a regularized least-squares instance.
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long)]
    pub p: Option<String>,
    /// Comma-separated `x0,x1,…`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// JSON file `{"p": …, "point": [...]}`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExponentArgs {
    #[arg(long)]
    pub p: String,
    /// Comma-separated `z0,z1,…`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// Norm bound `t` of the residual function.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Use this γ̂ instead of estimating it.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Small,
    Large,
    ExpPlus,
    ExpMinus,
    ExpBeta,
}

#[derive(Debug, Args)]
pub struct TightnessArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Zero-based coordinate the witness moves along.
    #[arg(long)]
    pub index: Option<usize>,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub eps_min: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub eps_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 12)]
    pub grid: usize,
    /// γ̂ draws (0 skips the estimate).
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    #[arg(long)]
    pub p: String,
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Held-out points for the error-bound check (0 skips it).
    #[arg(long, default_value_t = 1000)]
    pub check: usize,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    /// Problem JSON `{cone, A, b}`.
    #[arg(long)]
    pub problem: PathBuf,
    /// Chain JSON `{certificates: [...]}`; omitted means no reduction steps.
    #[arg(long)]
    pub chain: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// A strictly feasible point, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub hint: Option<String>,
    /// Declare `(L + a) ∩ K = {0}`.
    #[arg(long)]
    pub zero_intersection: bool,
}

#[derive(Debug, Args)]
pub struct KlArgs {
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Instance JSON; supplies p and the bound d ≤ s + 1.
    #[arg(long)]
    pub instance: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// `auto` or a positive step size.
    #[arg(long, default_value = "auto")]
    pub step: String,
    #[arg(long, default_value_t = 200_000)]
    pub iters: usize,
}
