use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use steiner_core::generate::{barabasi_albert, random_connected};
use steiner_core::graph::{load_edge_list, synthesize_weights, write_dense_edge_list};
use steiner_core::seedsel::{select_seeds, write_seed_file, SeedSpec, SeedStrategy};
use steiner_core::{phase, EngineConfig, Graph, QueueDiscipline, VertexId};

use crate::error::CliError;
use crate::report::{phase_entries, ConfigEcho, GraphSummaryRecord, RunReport, TreeSummary, SCHEMA_VERSION};
use crate::runner::{lanes_name, load_graph, load_seeds, median_f64, median_u64, run, Algorithm, RunOutcome};

/// Opens `path` for writing, or stdout when absent.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn out_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::io(path.unwrap_or(Path::new("<stdout>")), e)
}

pub struct PrepareArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    pub weights: Option<(u64, u64)>,
    pub unweighted: bool,
    pub rng_seed: u64,
}

pub fn prepare(args: PrepareArgs) -> Result<(), CliError> {
    let file = File::open(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let load = load_edge_list::<u32, _>(BufReader::new(file), !args.unweighted)
        .map_err(|source| CliError::Graph { path: args.input.clone(), source })?;
    let graph: Graph = match args.weights {
        Some((lo, hi)) => synthesize_weights(&load.graph, lo, hi, args.rng_seed)
            .map_err(|source| CliError::Graph { path: args.input.clone(), source })?,
        None => load.graph,
    };
    let mut out = sink(Some(&args.output))?;
    write_dense_edge_list(&graph, &mut out).and_then(|_| out.flush()).map_err(out_err(Some(&args.output)))?;

    let s = graph.summary();
    let range = match (s.min_weight, s.max_weight) {
        (Some(lo), Some(hi)) => format!("{lo}..{hi}"),
        _ => "none".into(),
    };
    println!("vertices {}", s.vertices);
    println!("arcs {}", s.arcs);
    println!("max_degree {}", s.max_degree);
    println!("avg_degree {:.3}", s.avg_degree);
    println!("weights {range}");
    if load.stats.self_loops_dropped + load.stats.duplicates_merged > 0 {
        eprintln!(
            "dropped {} self loops, merged {} duplicate edges",
            load.stats.self_loops_dropped, load.stats.duplicates_merged
        );
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    Random,
    Ba,
}

pub struct GenerateArgs {
    pub model: Model,
    pub vertices: usize,
    pub edges: Option<usize>,
    pub attach: usize,
    pub weights: (u64, u64),
    pub rng_seed: u64,
    pub output: PathBuf,
}

pub fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let (lo, hi) = args.weights;
    let graph: Graph = match args.model {
        Model::Random => random_connected(args.vertices, args.edges.unwrap_or(2 * args.vertices), lo, hi, args.rng_seed),
        Model::Ba => barabasi_albert::<u32>(args.vertices, args.attach, args.rng_seed)
            .and_then(|g| synthesize_weights(&g, lo, hi, args.rng_seed)),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = sink(Some(&args.output))?;
    write_dense_edge_list(&graph, &mut out).and_then(|_| out.flush()).map_err(out_err(Some(&args.output)))?;
    println!("vertices {} arcs {}", graph.vertex_count(), graph.arc_count());
    Ok(())
}

pub fn seeds(
    graph: &Path,
    strategy: SeedStrategy,
    count: usize,
    rng_seed: u64,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let graph = load_graph(graph)?;
    let spec = SeedSpec { strategy, count, rng_seed };
    let seeds = select_seeds(&graph, &spec)?;
    let mut out = sink(output)?;
    write_seed_file(&spec, &seeds, &mut out).and_then(|_| out.flush()).map_err(out_err(output))?;
    Ok(())
}

pub struct SolveArgs {
    pub graph: PathBuf,
    pub seeds: PathBuf,
    pub algorithm: Algorithm,
    pub config: EngineConfig,
    pub report: Option<PathBuf>,
    pub tree: Option<PathBuf>,
    pub with_ratio: bool,
}

fn config_echo(config: &EngineConfig, seeds: &crate::runner::SeedFile) -> ConfigEcho {
    ConfigEcho {
        partitions: config.partition_count,
        discipline: config.discipline.name().into(),
        lanes: lanes_name(config.lanes).into(),
        seed_rng_seed: seeds.rng_seed,
        seed_strategy: seeds.strategy.clone(),
    }
}

pub fn solve(args: SolveArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    let seed_file = load_seeds(&args.seeds)?;
    let seeds = &seed_file.seeds;
    let outcome = run(&graph, seeds, args.algorithm, &args.config)?;
    let optimal = match outcome.optimal {
        Some(d) => Some(d),
        None if args.with_ratio => run(&graph, seeds, Algorithm::Exact, &args.config)?.optimal,
        None => None,
    };
    let d = outcome.tree.total_distance();

    if let Some(path) = &args.tree {
        let mut out = sink(Some(path))?;
        outcome.tree.write_to(seeds.len(), &mut out).and_then(|_| out.flush()).map_err(out_err(Some(path)))?;
    }
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        algorithm: args.algorithm.name().into(),
        graph_summary: GraphSummaryRecord::from(&graph.summary()),
        seed_count: seeds.len(),
        phase_metrics: outcome.metrics.as_ref().map(phase_entries).unwrap_or_default(),
        wall_time_ms: outcome.wall.as_secs_f64() * 1e3,
        tree_summary: TreeSummary { edges: outcome.tree.edge_count(), total_distance: d },
        ratio: optimal.map(|m| ratio(d, m)),
        optimal_distance: optimal,
        config: config_echo(&args.config, &seed_file),
    };
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut out = sink(args.report.as_deref())?;
    writeln!(out, "{json}").and_then(|_| out.flush()).map_err(out_err(args.report.as_deref()))?;
    Ok(())
}

fn ratio(d: u64, optimal: u64) -> f64 {
    if optimal == 0 {
        1.0
    } else {
        d as f64 / optimal as f64
    }
}

/// Median timings and message counts over repeated runs of one configuration.
struct Aggregate {
    tree_edges: usize,
    total_distance: u64,
    tree_text: String,
    wall_ms: f64,
    phases: BTreeMap<&'static str, (f64, u64, u64)>,
}

fn repeat(
    graph: &Graph,
    seeds: &[VertexId],
    algorithm: Algorithm,
    config: &EngineConfig,
    repetitions: usize,
) -> Result<(Aggregate, RunOutcome), CliError> {
    let mut runs = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        runs.push(run(graph, seeds, algorithm, config)?);
    }
    let first = &runs[0];
    let text = first.tree.to_text(seeds.len());
    if runs.iter().any(|r| r.tree.to_text(seeds.len()) != text) {
        return Err(CliError::Validation(format!("{} returned different trees across repetitions", algorithm.name())));
    }
    let mut phases = BTreeMap::new();
    if first.metrics.is_some() {
        for name in phase::ALL {
            let stats: Vec<_> = runs.iter().filter_map(|r| r.metrics.as_ref()?.phase(name)).collect();
            if stats.len() != runs.len() {
                continue;
            }
            let mut ms: Vec<f64> = stats.iter().map(|p| p.wall_time.as_secs_f64() * 1e3).collect();
            let mut sent: Vec<u64> = stats.iter().map(|p| p.messages_sent).collect();
            let mut processed: Vec<u64> = stats.iter().map(|p| p.messages_processed).collect();
            phases.insert(name, (median_f64(&mut ms), median_u64(&mut sent), median_u64(&mut processed)));
        }
    }
    let mut wall: Vec<f64> = runs.iter().map(|r| r.wall.as_secs_f64() * 1e3).collect();
    let aggregate = Aggregate {
        tree_edges: first.tree.edge_count(),
        total_distance: first.tree.total_distance(),
        tree_text: text,
        wall_ms: median_f64(&mut wall),
        phases,
    };
    Ok((aggregate, runs.swap_remove(0)))
}

fn phase_header() -> Vec<String> {
    phase::ALL
        .iter()
        .flat_map(|p| [format!("{p}_ms"), format!("{p}_sent"), format!("{p}_processed")])
        .collect()
}

fn phase_cells(agg: &Aggregate) -> Vec<String> {
    phase::ALL
        .iter()
        .flat_map(|p| match agg.phases.get(p) {
            Some((ms, sent, processed)) => [format!("{ms:.3}"), sent.to_string(), processed.to_string()],
            None => [String::new(), String::new(), String::new()],
        })
        .collect()
}

fn csv_err(path: Option<&Path>) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::io(path.unwrap_or(Path::new("<stdout>")), e.into())
}

pub struct CompareArgs {
    pub graph: PathBuf,
    pub seeds: PathBuf,
    pub algorithms: Vec<Algorithm>,
    pub repetitions: usize,
    pub config: EngineConfig,
    pub output: Option<PathBuf>,
}

pub fn compare(args: CompareArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    let seeds = load_seeds(&args.seeds)?.seeds;
    let out_path = args.output.as_deref();
    let mut csv = csv::Writer::from_writer(sink(out_path)?);
    let mut header: Vec<String> =
        ["algorithm", "repetitions", "seed_count", "tree_edges", "total_distance", "ratio", "wall_time_ms"]
            .map(String::from)
            .into();
    header.extend(phase_header());
    csv.write_record(&header).map_err(csv_err(out_path))?;

    // The optimum is needed for every row's ratio, so the oracle runs first.
    let mut exact = None;
    if args.algorithms.contains(&Algorithm::Exact) {
        exact = Some(repeat(&graph, &seeds, Algorithm::Exact, &args.config, args.repetitions)?.0);
    }
    let optimal = exact.as_ref().map(|a| a.total_distance);
    for &algorithm in &args.algorithms {
        let agg = match (algorithm, &exact) {
            (Algorithm::Exact, Some(_)) => exact.take().expect("checked"),
            _ => match repeat(&graph, &seeds, algorithm, &args.config, args.repetitions) {
                Ok((agg, _)) => agg,
                Err(e) => {
                    csv.flush().map_err(out_err(out_path))?;
                    return Err(e);
                }
            },
        };
        let mut row = vec![
            algorithm.name().to_string(),
            args.repetitions.to_string(),
            seeds.len().to_string(),
            agg.tree_edges.to_string(),
            agg.total_distance.to_string(),
            optimal.map(|m| format!("{:.6}", ratio(agg.total_distance, m))).unwrap_or_default(),
            format!("{:.3}", agg.wall_ms),
        ];
        row.extend(phase_cells(&agg));
        csv.write_record(&row).map_err(csv_err(out_path))?;
        csv.flush().map_err(out_err(out_path))?;
    }
    Ok(())
}

pub struct MsgbenchArgs {
    pub graph: PathBuf,
    pub seeds: PathBuf,
    pub partitions: Vec<usize>,
    pub disciplines: Vec<QueueDiscipline>,
    pub repetitions: usize,
    pub config: EngineConfig,
    pub output: Option<PathBuf>,
}

pub fn msgbench(args: MsgbenchArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    let seeds = load_seeds(&args.seeds)?.seeds;
    let mut cells = Vec::new();
    for &p in &args.partitions {
        for &d in &args.disciplines {
            let config = EngineConfig { partition_count: p, discipline: d, ..args.config.clone() };
            let (agg, _) = repeat(&graph, &seeds, Algorithm::Voronoi, &config, args.repetitions)?;
            cells.push((p, d, agg));
        }
    }

    let voronoi_sent = |p: usize, d: QueueDiscipline| {
        cells.iter().find(|c| c.0 == p && c.1 == d).and_then(|c| c.2.phases.get(phase::VORONOI_CELL)).map(|v| v.1)
    };
    let out_path = args.output.as_deref();
    let mut csv = csv::Writer::from_writer(sink(out_path)?);
    let mut header: Vec<String> = [
        "partitions",
        "discipline",
        "lanes",
        "repetitions",
        "tree_edges",
        "total_distance",
        "wall_time_ms",
        "fifo_priority_ratio",
    ]
    .map(String::from)
    .into();
    header.extend(phase_header());
    csv.write_record(&header).map_err(csv_err(out_path))?;
    for (p, d, agg) in &cells {
        let ratio = match (voronoi_sent(*p, QueueDiscipline::Fifo), voronoi_sent(*p, QueueDiscipline::MinPriority)) {
            (Some(f), Some(q)) if q > 0 => format!("{:.4}", f as f64 / q as f64),
            _ => String::new(),
        };
        let mut row = vec![
            p.to_string(),
            d.name().to_string(),
            lanes_name(args.config.lanes).to_string(),
            args.repetitions.to_string(),
            agg.tree_edges.to_string(),
            agg.total_distance.to_string(),
            format!("{:.3}", agg.wall_ms),
            ratio,
        ];
        row.extend(phase_cells(agg));
        csv.write_record(&row).map_err(csv_err(out_path))?;
    }
    csv.flush().map_err(out_err(out_path))?;

    if let Some((p, d, _)) = cells.iter().find(|c| c.2.tree_text != cells[0].2.tree_text) {
        return Err(CliError::Validation(format!(
            "tree for partitions={p} discipline={} differs from partitions={} discipline={}",
            d.name(),
            cells[0].0,
            cells[0].1.name()
        )));
    }
    Ok(())
}
