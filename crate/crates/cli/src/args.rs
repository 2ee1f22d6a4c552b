use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cdgraph", version, about = "Occurrence analysis for prime character degree graphs")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Directory holding the verdict cache.
    #[arg(long, global = true, env = "CDG_CACHE_DIR")]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Replay every cached certificate before trusting it.
    #[arg(long, global = true)]
    pub paranoid: bool,
    /// Switch a certificate rule off (repeatable).
    #[arg(long = "disable-rule", global = true, value_name = "RULE")]
    pub disable_rules: Vec<String>,
    /// Enable knowledge-base entries that are asserted without proof.
    #[arg(long, global = true)]
    pub enable_optional_kb: bool,
    /// Knowledge-base configuration file (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub kb: Option<PathBuf>,
    /// Maximum subgraph checks per admissibility stage.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Md,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "KT", alias = "kt")]
    Kt,
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "R", alias = "r")]
    R,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a family graph.
    Gen {
        #[arg(value_enum)]
        family: Family,
        k: usize,
        /// `t` for KT, `n` for L and R.
        n: usize,
    },
    /// Classify a graph (exit 0 Occurs, 1 NotOccurs, 2 Unknown).
    Check {
        /// Graph JSON file, or `-` for stdin.
        graph: PathBuf,
    },
    /// Admissibility of one vertex or of every non-isolated vertex.
    Admissible {
        graph: PathBuf,
        #[arg(long)]
        vertex: Option<String>,
        /// Plain admissibility instead of strong admissibility.
        #[arg(long)]
        weak: bool,
    },
    /// Check the five-clause hypothesis at a vertex.
    Hypothesis { graph: PathBuf, vertex: String },
    /// Run the non-occurrence proof for a left-family graph.
    Prove {
        #[arg(value_enum)]
        family: Family,
        k: usize,
        n: usize,
    },
}
