//! `hisgraph`: partition, sample and measure graphs from the command line.

mod commands;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::{CliError, CliResult, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "hisgraph", version, about, args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "HISGRAPH_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory [default: hisgraph-out/<command>]
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Do not print the summary JSON.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Write a synthetic graph as an edge list.
    Generate(GenerateArgs),
    /// Split a graph into core and periphery.
    Partition(PartitionArgs),
    /// Draw subgraphs and their normalization counters.
    Sample(SampleArgs),
    /// Ollivier-Ricci curvature of a graph or of sampled subgraphs.
    Curvature(CurvatureArgs),
    /// Chain preservation rate of sampled subgraphs.
    Chains(ChainsArgs),
    /// Node aggregation variance of sampled subgraphs.
    Variance(VarianceArgs),
    /// Re-run a command from its manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Partition(_) => "partition",
            Command::Sample(_) => "sample",
            Command::Curvature(_) => "curvature",
            Command::Chains(_) => "chains",
            Command::Variance(_) => "variance",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Model {
    Ba,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "ba")]
    pub model: Model,
    #[arg(long)]
    pub nodes: usize,
    /// Edges attached per new node.
    #[arg(long)]
    pub m: usize,
}

/// Where to read the parent graph from.
#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Edge list (`u v` per line).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Keep nodes of degree zero instead of dropping them.
    #[arg(long)]
    pub keep_isolated: bool,
    /// Node features (CSV, or raw `.bin`/`.f32`).
    #[arg(long)]
    pub features: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Also write membership.csv.
    #[arg(long)]
    pub membership: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value = "his-ff")]
    pub method: hisgraph::sampling::Method,
    /// Target size as a fraction of the node count.
    #[arg(long, conflicts_with = "size")]
    pub rate: Option<f64>,
    /// Target size in nodes.
    #[arg(long)]
    pub size: Option<usize>,
    /// Dataset preset for rate, walk length, gamma and baseline budgets.
    #[arg(long, conflicts_with_all = ["rate", "size"])]
    pub preset: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub walk_length: Option<usize>,
    /// Burn probability of the forest-fire geometric draw.
    #[arg(long)]
    pub geometric_p: Option<f64>,
    /// Walk roots for saint-rw.
    #[arg(long)]
    pub roots: Option<usize>,
    /// Edge draws for saint-edge.
    #[arg(long)]
    pub edge_budget: Option<usize>,
    /// Skip node_counters.csv and edge_counters.csv.
    #[arg(long)]
    pub no_counters: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Graph,
    Subgraphs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PoolingArg {
    Occurrences,
    PerSubgraph,
}

#[derive(Debug, Clone, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value = "exact")]
    pub mode: hisgraph::curvature::CurvatureMode,
    #[arg(long, value_enum, default_value = "graph")]
    pub scope: Scope,
    /// Output directory of a `sample` run.
    #[arg(long)]
    pub subgraphs: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "occurrences")]
    pub pooling: PoolingArg,
    /// Run exact mode above the maximum-degree guard.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ChainsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub subgraphs: PathBuf,
    /// Degree bound of the chain endpoints; comma separated for several.
    #[arg(long, value_delimiter = ',', default_value = "20")]
    pub k: Vec<usize>,
    /// Chain count above which chains are subsampled.
    #[arg(long, default_value_t = hisgraph::metrics::DEFAULT_CHAIN_CAP)]
    pub cap: u64,
}

#[derive(Debug, Clone, Args)]
pub struct VarianceArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub subgraphs: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub layers: usize,
    #[arg(long, default_value_t = 16)]
    pub hidden: usize,
    #[arg(long, default_value_t = 0)]
    pub weight_seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// manifest.json of the run to repeat.
    #[arg(long)]
    pub manifest: PathBuf,
}

fn run(argv: Vec<String>) -> CliResult<()> {
    let cli = Cli::try_parse_from(std::iter::once("hisgraph".to_owned()).chain(argv.iter().cloned()))
        .map_err(|e| {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            CliError {
                code,
                message: String::new(),
            }
        })?;
    if cli.global.threads > 0 {
        // A second build (replay runs in-process) keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global();
    }
    let summary = commands::dispatch(&cli, argv)?;
    if !cli.global.quiet {
        let text = serde_json::to_string_pretty(&summary).map_err(hisgraph::Error::from)?;
        println!("{text}");
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(std::env::args().skip(1).collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("hisgraph: {e}");
            }
            ExitCode::from(e.code as u8)
        }
    }
}
