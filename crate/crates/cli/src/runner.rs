//! Loading inputs and running one algorithm.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use steiner_core::engine::EngineMetrics;
use steiner_core::graph::load_edge_list;
use steiner_core::seedsel::read_seed_file;
use steiner_core::{
    exact_steiner, kmb_steiner, mehlhorn_steiner, solve_steiner, validate_tree, EngineConfig, ExactLimits, Graph,
    Lanes, Tree, VertexId,
};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Voronoi,
    Kmb,
    Mehlhorn,
    Exact,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Voronoi => "voronoi",
            Algorithm::Kmb => "kmb",
            Algorithm::Mehlhorn => "mehlhorn",
            Algorithm::Exact => "exact",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum LaneArg {
    Single,
    #[default]
    PerPartition,
}

impl From<LaneArg> for Lanes {
    fn from(l: LaneArg) -> Self {
        match l {
            LaneArg::Single => Lanes::Single,
            LaneArg::PerPartition => Lanes::PerPartition,
        }
    }
}

pub fn lanes_name(l: Lanes) -> &'static str {
    match l {
        Lanes::Single => "single",
        Lanes::PerPartition => "per-partition",
    }
}

/// Reads a prepared graph. Vertex labels must be the dense ids `0..n`.
pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let load = load_edge_list::<u32, _>(BufReader::new(file), true)
        .map_err(|source| CliError::Graph { path: path.to_path_buf(), source })?;
    let graph = load.graph;
    if graph.labels().iter().enumerate().any(|(i, &l)| l != i as u64) {
        return Err(CliError::Input(format!(
            "{}: vertex ids are not contiguous from 0; run `steiner prepare` first",
            path.display()
        )));
    }
    Ok(graph)
}

/// Seed ids plus whatever the header recorded about how they were chosen.
pub struct SeedFile {
    pub seeds: Vec<VertexId>,
    pub strategy: Option<String>,
    pub rng_seed: Option<u64>,
}

pub fn load_seeds(path: &Path) -> Result<SeedFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let seeds = read_seed_file(text.as_bytes())?;
    let mut strategy = None;
    let mut rng_seed = None;
    if let Some(header) = text.lines().next().and_then(|l| l.strip_prefix('#')) {
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("strategy", v)) => strategy = Some(v.to_string()),
                Some(("rng_seed", v)) => rng_seed = v.parse().ok(),
                _ => {}
            }
        }
    }
    Ok(SeedFile { seeds, strategy, rng_seed })
}

pub struct RunOutcome {
    pub tree: Tree,
    pub metrics: Option<EngineMetrics>,
    pub wall: Duration,
    pub optimal: Option<u64>,
}

/// Runs `algorithm` and validates its tree. Timing covers the algorithm only.
pub fn run(graph: &Graph, seeds: &[VertexId], algorithm: Algorithm, config: &EngineConfig) -> Result<RunOutcome, CliError> {
    let started = Instant::now();
    let (tree, metrics, optimal) = match algorithm {
        Algorithm::Voronoi => {
            let sol = solve_steiner(graph, seeds, config)?;
            (sol.tree, Some(sol.metrics), None)
        }
        Algorithm::Kmb => (kmb_steiner(graph, seeds)?, None, None),
        Algorithm::Mehlhorn => (mehlhorn_steiner(graph, seeds)?, None, None),
        Algorithm::Exact => {
            let (d, tree) = exact_steiner(graph, seeds, ExactLimits::default())?;
            (tree, None, Some(d))
        }
    };
    let wall = started.elapsed();
    let report = validate_tree(&tree, seeds, graph);
    if !report.all_passed() {
        return Err(CliError::Validation(format!("{} tree: {report}", algorithm.name())));
    }
    Ok(RunOutcome { tree, metrics, wall, optimal })
}

/// Median of a non-empty sample; the mean of the middle pair for even sizes.
pub fn median_f64(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

pub fn median_u64(values: &mut [u64]) -> u64 {
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median_u64(&mut [5, 1, 3]), 3);
        assert_eq!(median_u64(&mut [4, 1, 3, 2]), 2);
        assert_eq!(median_f64(&mut [2.0, 1.0]), 1.5);
    }
}
