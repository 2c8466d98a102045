use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kottsep_core::normed::SeparationMode;
use kottsep_core::FreeMode;

/// Certify free subsets of ternary cube sets, Kottman-type values and
/// separated unit vectors in finite-dimensional normed spaces.
#[derive(Debug, Parser)]
#[command(name = "kottsep", version, about, propagate_version = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Write the certificate here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Override one budget, e.g. `--budget enumeration_max_sets=100000`. Repeatable.
    #[arg(long = "budget", global = true, value_name = "KEY=VALUE")]
    pub budgets: Vec<String>,

    /// TOML config file; defaults to $KOTTSEP_CONFIG when set.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// K(l): least N such that every admissible set in C_N has a difference-free l-subset.
    Kottman(ValueArgs),
    /// S(l): the same for sum-free subsets.
    Sumfree(ValueArgs),
    /// K_C(l): the same for Gaussian sets in V_n.
    Gaussian(ValueArgs),
    /// Tight witness set and its maximum free subset.
    Witness {
        #[arg(value_enum)]
        mode: ModeArg,
        l: usize,
    },
    /// Find a free subset of full size in an admissible set.
    Free {
        #[arg(value_enum)]
        mode: ModeArg,
        #[arg(long, value_name = "FILE")]
        set: PathBuf,
    },
    /// Extend a free set of the projection by one element.
    Extend {
        #[arg(long, value_name = "FILE")]
        set: PathBuf,
        /// JSON array of cube vectors one dimension down.
        #[arg(long, value_name = "FILE")]
        base: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Diff)]
        mode: ModeArg,
    },
    /// Maximum crossed-support sets on the n x n grid.
    Grid { n: usize },
    /// Auerbach basis of a norm.
    Auerbach {
        #[arg(long, value_name = "FILE")]
        norm: PathBuf,
    },
    /// Separated unit vectors for a norm.
    Separate {
        #[arg(value_enum)]
        mode: SeparateArg,
        #[arg(long, value_name = "FILE")]
        norm: PathBuf,
    },
    /// Re-check a certificate.
    Verify { certificate: PathBuf },
    /// Run the acceptance suite and print claimed against computed values.
    Selftest {
        /// Run only these criteria (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long, value_enum, hide = true)]
        mutant: Option<Mutant>,
    },
}

#[derive(Debug, Args)]
pub struct ValueArgs {
    pub l: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    pub strategy: StrategyArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    /// Exhaustive while it fits the budgets, closed form beyond.
    Auto,
    TheoremBacked,
    /// Exhaustive or fail with a budget error.
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Diff,
    Sum,
}

impl From<ModeArg> for FreeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Diff => FreeMode::Difference,
            ModeArg::Sum => FreeMode::Sum,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeparateArg {
    Diff,
    Sum,
    Complex,
}

impl From<SeparateArg> for SeparationMode {
    fn from(m: SeparateArg) -> Self {
        match m {
            SeparateArg::Diff => SeparationMode::Difference,
            SeparateArg::Sum => SeparationMode::Sum,
            SeparateArg::Complex => SeparationMode::Complex,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mutant {
    OffByOne,
}
