//! `steiner`: prepare graphs, pick seeds, solve, compare and benchmark.
//!
//! Exit statuses: 0 success, 1 internal error, 2 usage, 3 I/O or parse error,
//! 4 seeds disconnected, 5 exact oracle refused, 6 tree validation failure.

mod commands;
mod error;
mod report;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use steiner_core::seedsel::SeedStrategy;
use steiner_core::{EngineConfig, MessageBudget, QueueDiscipline};

use crate::commands::{CompareArgs, GenerateArgs, Model, MsgbenchArgs, PrepareArgs, SolveArgs};
use crate::error::CliError;
use crate::runner::{Algorithm, LaneArg};

#[derive(Parser)]
#[command(name = "steiner", version, about = "Steiner tree approximation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct EngineArgs {
    /// Number of vertex partitions.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1024))]
    partitions: u32,
    /// Visitor queue discipline: fifo or priority.
    #[arg(long, default_value = "priority")]
    discipline: QueueDiscipline,
    #[arg(long, value_enum, default_value_t = LaneArg::PerPartition)]
    lanes: LaneArg,
    /// Message cap per phase as a multiple of the arc count; 0 disables it.
    #[arg(long, default_value_t = 64)]
    budget_per_arc: u64,
}

impl EngineArgs {
    fn config(&self) -> EngineConfig {
        let budget = match self.budget_per_arc {
            0 => MessageBudget::Unlimited,
            n => MessageBudget::PerArc(n),
        };
        EngineConfig { budget, ..EngineConfig::new(self.partitions as usize, self.discipline, self.lanes.into()) }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Symmetrize, remap ids and optionally re-weight an edge list.
    Prepare {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Draw weights uniformly from MIN:MAX instead of keeping the input's.
        #[arg(long, value_parser = parse_range)]
        weights: Option<(u64, u64)>,
        /// Ignore a third column; every edge gets weight 1 unless --weights is given.
        #[arg(long)]
        unweighted: bool,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Write a random connected or scale-free graph.
    Generate {
        #[arg(long, value_enum, default_value_t = Model::Random)]
        model: Model,
        #[arg(long)]
        vertices: usize,
        /// Edge count for the random model (default 2 per vertex).
        #[arg(long)]
        edges: Option<usize>,
        /// Edges per new vertex for the scale-free model.
        #[arg(long, default_value_t = 8)]
        attach: usize,
        #[arg(long, value_parser = parse_range, default_value = "1:1")]
        weights: (u64, u64),
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Select seed vertices from the largest component.
    Seeds {
        graph: PathBuf,
        #[arg(long)]
        strategy: SeedStrategy,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build and validate one Steiner tree; write a JSON report.
    Solve {
        graph: PathBuf,
        seeds: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Voronoi)]
        algo: Algorithm,
        #[command(flatten)]
        engine: EngineArgs,
        /// Report path; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Tree output path.
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Also run the exact oracle and report D / D_min.
        #[arg(long)]
        ratio: bool,
    },
    /// Run several algorithms and write one CSV row of medians per algorithm.
    Compare {
        graph: PathBuf,
        seeds: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "voronoi,mehlhorn")]
        algos: Vec<Algorithm>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        repetitions: u32,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Voronoi pipeline message counts over partitions x disciplines.
    Msgbench {
        graph: PathBuf,
        seeds: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        partition_list: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "fifo,priority")]
        disciplines: Vec<QueueDiscipline>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        repetitions: u32,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected MIN:MAX, got `{s}`"))?;
    let lo: u64 = lo.trim().parse().map_err(|e| format!("bad MIN `{lo}`: {e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("bad MAX `{hi}`: {e}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("need 1 <= MIN <= MAX, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Prepare { input, output, weights, unweighted, rng_seed } => {
            commands::prepare(PrepareArgs { input, output, weights, unweighted, rng_seed })
        }
        Command::Generate { model, vertices, edges, attach, weights, rng_seed, output } => {
            commands::generate(GenerateArgs { model, vertices, edges, attach, weights, rng_seed, output })
        }
        Command::Seeds { graph, strategy, count, rng_seed, output } => {
            commands::seeds(&graph, strategy, count, rng_seed, output.as_deref())
        }
        Command::Solve { graph, seeds, algo, engine, report, tree, ratio } => commands::solve(SolveArgs {
            graph,
            seeds,
            algorithm: algo,
            config: engine.config(),
            report,
            tree,
            with_ratio: ratio,
        }),
        Command::Compare { graph, seeds, algos, repetitions, engine, output } => commands::compare(CompareArgs {
            graph,
            seeds,
            algorithms: algos,
            repetitions: repetitions as usize,
            config: engine.config(),
            output,
        }),
        Command::Msgbench { graph, seeds, partition_list, disciplines, repetitions, engine, output } => {
            commands::msgbench(MsgbenchArgs {
                graph,
                seeds,
                partitions: partition_list.into_iter().map(|p| p as usize).collect(),
                disciplines,
                repetitions: repetitions as usize,
                config: engine.config(),
                output,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("steiner: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
