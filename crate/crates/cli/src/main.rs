//! `srcloc`: generate graphs, simulate diffusions, estimate sources and run
//! benchmark sweeps.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use srcloc::evaluation::Algorithm;
use srcloc::graph::GraphFamily;
use srcloc::gromov::TargetKind;

use config::{overlay, parse_enum, UsageError};

#[derive(Debug, Parser)]
#[command(
    name = "srcloc",
    version,
    about = "Infection source estimation from partial timestamps"
)]
struct Cli {
    /// TOML file whose keys (flag names) override the flags given here.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a random graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Simulate a diffusion and write sampled observations.
    Simulate(SimulateArgs),
    /// Estimate one or several sources from observations.
    Estimate(EstimateArgs),
    /// Run a benchmark sweep described by a spec file.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct GenerateArgs {
    /// er-tree, ba-tree, er or ba.
    #[arg(long, value_parser = parse_enum::<GraphFamily>)]
    pub family: Option<GraphFamily>,
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Required by er and ba.
    #[arg(long)]
    pub mean_degree: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
overlay!(GenerateArgs {
    family,
    nodes,
    mean_degree,
    seed,
    out
});

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SimulateArgs {
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Comma-separated node ids as they appear in the edge list.
    #[arg(long)]
    pub sources: Option<String>,
    /// Comma-separated, one per source; all zero when omitted.
    #[arg(long)]
    pub start_times: Option<String>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma2: Option<f64>,
    #[arg(long)]
    pub fraction: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_obs: Option<PathBuf>,
}
overlay!(SimulateArgs {
    graph,
    sources,
    start_times,
    mu,
    sigma2,
    fraction,
    seed,
    out_obs
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Single,
    Multi,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EstimateArgs {
    /// single (default) or multi.
    #[arg(long, value_parser = parse_enum::<Mode>)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub obs: Option<PathBuf>,
    /// scaled-identity (default) or diag.
    #[arg(long, value_parser = parse_enum::<TargetKind>)]
    pub target: Option<TargetKind>,
    /// Cap on the number of clusters in multi mode.
    #[arg(long)]
    pub max_sources: Option<usize>,
    /// gssi (default), mle-tree, bfs-mle or naive-gssi.
    #[arg(long, value_parser = parse_enum::<Algorithm>)]
    pub algorithm: Option<Algorithm>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
overlay!(EstimateArgs {
    mode,
    graph,
    obs,
    target,
    max_sources,
    algorithm,
    out
});

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
overlay!(BenchmarkArgs { spec, workers, out_dir });

fn with_config<T>(args: T, path: Option<&PathBuf>) -> anyhow::Result<T>
where
    T: config::Overlay + serde::de::DeserializeOwned,
{
    match path {
        Some(p) => Ok(args.overlay(config::load_document(p)?)),
        None => Ok(args),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = cli.config.as_ref();
    match cli.command {
        Command::Generate(a) => commands::generate(with_config(a, cfg)?),
        Command::Simulate(a) => commands::simulate(with_config(a, cfg)?),
        Command::Estimate(a) => commands::estimate(with_config(a, cfg)?),
        Command::Benchmark(a) => commands::benchmark(with_config(a, cfg)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
