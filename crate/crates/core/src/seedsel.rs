//! Seed selection strategies.
//!
//! Every strategy draws from the largest connected component only and is a
//! pure function of `(graph, spec)`.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{bfs_levels, largest_connected_component, VertexId, WeightedGraph};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedStrategy {
    BfsLevel,
    UniformRandom,
    Eccentric,
    Proximate,
}

impl SeedStrategy {
    pub const ALL: [SeedStrategy; 4] =
        [SeedStrategy::BfsLevel, SeedStrategy::UniformRandom, SeedStrategy::Eccentric, SeedStrategy::Proximate];

    pub fn name(self) -> &'static str {
        match self {
            SeedStrategy::BfsLevel => "bfs_level",
            SeedStrategy::UniformRandom => "uniform",
            SeedStrategy::Eccentric => "eccentric",
            SeedStrategy::Proximate => "proximate",
        }
    }
}

impl fmt::Display for SeedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeedStrategy {
    type Err = SeedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bfs_level" | "bfs-level" | "bfs" => Ok(SeedStrategy::BfsLevel),
            "uniform" | "uniform_random" | "random" => Ok(SeedStrategy::UniformRandom),
            "eccentric" => Ok(SeedStrategy::Eccentric),
            "proximate" => Ok(SeedStrategy::Proximate),
            other => Err(SeedError::UnknownStrategy(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub strategy: SeedStrategy,
    pub count: usize,
    pub rng_seed: u64,
}

#[derive(Debug, Error)]
pub enum SeedError {
    #[error("seed count must be at least 1")]
    ZeroCount,
    #[error("requested {requested} seeds but the largest component has {available} vertices")]
    CountTooLarge { requested: usize, available: usize },
    #[error("start vertex {0} is not in the largest component")]
    StartOutsideComponent(VertexId),
    #[error("unknown seed strategy {0:?}")]
    UnknownStrategy(String),
    #[error("seed file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Dispatches on `spec.strategy`. The result is sorted ascending.
pub fn select_seeds<W: Weight>(graph: &WeightedGraph<W>, spec: &SeedSpec) -> Result<Vec<VertexId>, SeedError> {
    match spec.strategy {
        SeedStrategy::BfsLevel => select_bfs_level(graph, spec),
        SeedStrategy::UniformRandom => select_uniform_random(graph, spec),
        SeedStrategy::Eccentric => select_eccentric(graph, spec),
        SeedStrategy::Proximate => select_proximate(graph, spec),
    }
}

fn component_for(graph: &WeightedGraph<impl Weight>, count: usize) -> Result<Vec<VertexId>, SeedError> {
    if count == 0 {
        return Err(SeedError::ZeroCount);
    }
    let component = largest_connected_component(graph);
    if count > component.len() {
        return Err(SeedError::CountTooLarge { requested: count, available: component.len() });
    }
    Ok(component)
}

/// Per-level quotas proportional to level sizes, rounded by largest remainder.
///
/// Leftover slots go to the largest remainders; ties prefer the more populous
/// level, then the shallower one.
pub fn level_quotas(level_sizes: &[usize], count: usize) -> Vec<usize> {
    let total: usize = level_sizes.iter().sum();
    if total == 0 {
        return vec![0; level_sizes.len()];
    }
    let mut quotas: Vec<usize> = level_sizes.iter().map(|&s| count * s / total).collect();
    let assigned: usize = quotas.iter().sum();
    let mut order: Vec<usize> = (0..level_sizes.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(count * level_sizes[i] % total), std::cmp::Reverse(level_sizes[i]), i));
    for &i in order.iter().take(count - assigned) {
        quotas[i] += 1;
    }
    quotas
}

/// Vertices sampled per BFS level of the root's component, in proportion to
/// level population. The root is the smallest id of the largest component.
pub fn select_bfs_level<W: Weight>(graph: &WeightedGraph<W>, spec: &SeedSpec) -> Result<Vec<VertexId>, SeedError> {
    let component = component_for(graph, spec.count)?;
    let levels = bfs_levels(graph, component[0]);
    let depth = component.iter().filter_map(|&v| levels[v as usize]).max().unwrap_or(0) as usize;
    let mut by_level: Vec<Vec<VertexId>> = vec![Vec::new(); depth + 1];
    for &v in &component {
        by_level[levels[v as usize].expect("component member") as usize].push(v);
    }
    let sizes: Vec<usize> = by_level.iter().map(Vec::len).collect();
    let quotas = level_quotas(&sizes, spec.count);

    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut seeds = Vec::with_capacity(spec.count);
    for (members, quota) in by_level.iter().zip(quotas) {
        seeds.extend(members.choose_multiple(&mut rng, quota).copied());
    }
    seeds.sort_unstable();
    Ok(seeds)
}

/// Uniform sample without replacement from the largest component.
pub fn select_uniform_random<W: Weight>(graph: &WeightedGraph<W>, spec: &SeedSpec) -> Result<Vec<VertexId>, SeedError> {
    let component = component_for(graph, spec.count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut seeds: Vec<VertexId> = component.choose_multiple(&mut rng, spec.count).copied().collect();
    seeds.sort_unstable();
    Ok(seeds)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Farthest,
    Nearest,
}

/// k-BFS from an explicit `start`: each next source has the largest
/// (`Farthest`) or smallest (`Nearest`) sum of hop levels from all previous
/// sources, ties to the smallest id. Returned in selection order.
pub fn k_bfs<W: Weight>(
    graph: &WeightedGraph<W>,
    start: VertexId,
    count: usize,
    extremum: Extremum,
) -> Result<Vec<VertexId>, SeedError> {
    let component = component_for(graph, count)?;
    if component.binary_search(&start).is_err() {
        return Err(SeedError::StartOutsideComponent(start));
    }
    let mut selected = vec![false; graph.vertex_count()];
    let mut summed = vec![0u64; graph.vertex_count()];
    let mut order = Vec::with_capacity(count);
    let mut source = start;
    loop {
        selected[source as usize] = true;
        order.push(source);
        if order.len() == count {
            return Ok(order);
        }
        let levels = bfs_levels(graph, source);
        for &v in &component {
            summed[v as usize] += u64::from(levels[v as usize].expect("component member"));
        }
        let candidates = component.iter().copied().filter(|&v| !selected[v as usize]);
        // The id in the key breaks ties toward the smallest vertex.
        source = match extremum {
            Extremum::Farthest => candidates.max_by_key(|&v| (summed[v as usize], std::cmp::Reverse(v))),
            Extremum::Nearest => candidates.min_by_key(|&v| (summed[v as usize], v)),
        }
        .expect("count within component size");
    }
}

fn random_start(component: &[VertexId], rng_seed: u64) -> VertexId {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    component[rng.gen_range(0..component.len())]
}

/// Spread-out seeds: random start, then repeated farthest-by-summed-levels.
pub fn select_eccentric<W: Weight>(graph: &WeightedGraph<W>, spec: &SeedSpec) -> Result<Vec<VertexId>, SeedError> {
    let start = random_start(&component_for(graph, spec.count)?, spec.rng_seed);
    let mut seeds = k_bfs(graph, start, spec.count, Extremum::Farthest)?;
    seeds.sort_unstable();
    Ok(seeds)
}

/// Clustered seeds: random start, then repeated nearest-by-summed-levels.
pub fn select_proximate<W: Weight>(graph: &WeightedGraph<W>, spec: &SeedSpec) -> Result<Vec<VertexId>, SeedError> {
    let start = random_start(&component_for(graph, spec.count)?, spec.rng_seed);
    let mut seeds = k_bfs(graph, start, spec.count, Extremum::Nearest)?;
    seeds.sort_unstable();
    Ok(seeds)
}

/// Writes one id per line after a `# strategy=.. rng_seed=.. count=..` header.
pub fn write_seed_file(spec: &SeedSpec, seeds: &[VertexId], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "# strategy={} rng_seed={} count={}", spec.strategy, spec.rng_seed, seeds.len())?;
    for s in seeds {
        writeln!(out, "{s}")?;
    }
    Ok(())
}

/// Reads vertex ids, skipping blank lines and `#` comments.
pub fn read_seed_file(reader: impl BufRead) -> Result<Vec<VertexId>, SeedError> {
    let mut seeds = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let id = text
            .parse::<VertexId>()
            .map_err(|e| SeedError::Parse { line: i + 1, message: format!("{text:?}: {e}") })?;
        seeds.push(id);
    }
    Ok(seeds)
}
