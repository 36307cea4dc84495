use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Hyperbolic entropies, extropies and Lesche-stability experiments.
///
/// Exit codes: 0 ok, 1 I/O failure, 2 invalid input, 3 non-convergence,
/// 4 invariant failure.
#[derive(Debug, Parser)]
#[command(name = "hyperentropy", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write results to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Basis used to display hyperbolic values (computation is unaffected).
    #[arg(long, global = true, value_enum, default_value_t = Basis::Idempotent)]
    pub basis: Basis,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate measures on a distribution file.
    Entropy(EntropyArgs),
    /// Sweep perturbation families and report Lesche ratios.
    Stability(StabilityArgs),
    /// Tabulate the hyperbolic Rényi entropy as the order approaches 1.
    Limits(LimitsArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Distribution file (CSV or JSON); standard input when absent.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,

    /// Measure as `name` or `name:order`; repeatable. Defaults to every
    /// order-free measure matching the input kind (plus ordered ones when
    /// --order is given).
    #[arg(long = "measure", value_name = "SPEC")]
    pub measures: Vec<String>,

    /// Order `a1,a2` (idempotent components) or `a` for `a·1_D`, used by
    /// measures given without one.
    #[arg(long, value_name = "ORDER", allow_hyphen_values = true)]
    pub order: Option<String>,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// Measure as `name` or `name:order`; repeatable.
    #[arg(long = "measure", value_name = "SPEC", default_value = "shannon")]
    pub measures: Vec<String>,

    /// Order used by measures given without one.
    #[arg(long, value_name = "ORDER", allow_hyphen_values = true)]
    pub order: Option<String>,

    /// Perturbation families, comma separated.
    #[arg(
        long = "family",
        value_name = "LIST",
        default_value = "CertaintySpread,UniformSpike,RandomSmooth"
    )]
    pub families: String,

    /// System sizes, comma separated.
    #[arg(
        long = "N-grid",
        value_name = "LIST",
        default_value = "10,100,1000,10000,100000"
    )]
    pub n_grid: String,

    /// Perturbation sizes, comma separated.
    #[arg(
        long = "delta-grid",
        value_name = "LIST",
        default_value = "0.0001,0.001,0.01"
    )]
    pub delta_grid: String,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    /// Distribution file (CSV or JSON); standard input when absent.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,

    /// Largest accepted gap between either limit route and the strong
    /// Shannon entropy (cannot exceed 1e-6, which the limit check itself
    /// enforces).
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Extra distribution files for the fixture round-trip invariant;
    /// repeatable.
    #[arg(long = "input", value_name = "PATH")]
    pub inputs: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    /// `x1·e1 + x2·e2`, columns `_e1`/`_e2`.
    Idempotent,
    /// `a + b·k`, columns `_1`/`_k`.
    UnitK,
}
