//! Symmetric weighted graphs in compressed adjacency form, edge-list I/O,
//! weight synthesis, connectivity and partition ownership.

use std::collections::{BTreeMap, VecDeque};
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::weight::Weight;

/// Dense vertex identifier, `0..vertex_count`.
pub type VertexId = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Immutable undirected graph stored as symmetric arcs.
///
/// Every undirected edge `{u, v}` appears as the two arcs `(u, v)` and
/// `(v, u)` with the same weight. Neighbor lists are sorted by vertex id,
/// there are no self-loops and at most one edge per vertex pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph<W: Weight = u32> {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    weights: Vec<W>,
    labels: Vec<u64>,
}

/// What happened while normalizing raw edges into a graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
}

impl<W: Weight> WeightedGraph<W> {
    /// Builds a graph on `vertex_count` vertices with identity labels.
    ///
    /// Self-loops are dropped and parallel edges collapse to their minimum
    /// weight. Panics if an endpoint is out of range or a weight is zero.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> (Self, BuildStats)
    where
        I: IntoIterator<Item = (VertexId, VertexId, W)>,
    {
        let labels = (0..vertex_count as u64).collect();
        Self::from_edges_labeled(labels, edges)
    }

    fn from_edges_labeled<I>(labels: Vec<u64>, edges: I) -> (Self, BuildStats)
    where
        I: IntoIterator<Item = (VertexId, VertexId, W)>,
    {
        let n = labels.len();
        let mut stats = BuildStats::default();
        let mut arcs: Vec<(VertexId, VertexId, W)> = Vec::new();
        for (u, v, w) in edges {
            assert!((u as usize) < n && (v as usize) < n, "edge ({u}, {v}) out of range");
            assert!(w > W::zero(), "edge weights must be positive");
            if u == v {
                stats.self_loops_dropped += 1;
                continue;
            }
            arcs.push((u, v, w));
            arcs.push((v, u, w));
        }
        arcs.sort_unstable();
        // Sorted by (u, v, w): the first arc of each (u, v) run carries the minimum weight.
        let before = arcs.len();
        arcs.dedup_by(|next, kept| next.0 == kept.0 && next.1 == kept.1);
        stats.duplicates_merged = (before - arcs.len()) / 2;

        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in &arcs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.iter().map(|a| a.1).collect();
        let weights = arcs.iter().map(|a| a.2).collect();
        (Self { offsets, targets, weights, labels }, stats)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of directed arcs, i.e. twice the undirected edge count.
    pub fn arc_count(&self) -> usize {
        self.targets.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, W)> + '_ {
        let range = self.offsets[v as usize]..self.offsets[v as usize + 1];
        self.targets[range.clone()].iter().copied().zip(self.weights[range].iter().copied())
    }

    /// Weight of edge `{u, v}`, if present.
    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<W> {
        let range = self.offsets[u as usize]..self.offsets[u as usize + 1];
        let slice = &self.targets[range.clone()];
        slice.binary_search(&v).ok().map(|i| self.weights[range.start + i])
    }

    /// Undirected edges `(u, v, w)` with `u < v`, ascending by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, W)> + '_ {
        (0..self.vertex_count() as VertexId)
            .flat_map(move |u| self.neighbors(u).filter(move |&(v, _)| v > u).map(move |(v, w)| (u, v, w)))
    }

    /// Original label of a dense vertex id.
    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn summary(&self) -> GraphSummary {
        let n = self.vertex_count();
        let max_degree = (0..n as VertexId).map(|v| self.degree(v)).max().unwrap_or(0);
        let min_weight = self.weights.iter().min().map(|w| w.widen());
        let max_weight = self.weights.iter().max().map(|w| w.widen());
        GraphSummary {
            vertices: n,
            arcs: self.arc_count(),
            max_degree,
            avg_degree: if n == 0 { 0.0 } else { self.arc_count() as f64 / n as f64 },
            min_weight,
            max_weight,
        }
    }
}

/// Dataset characteristics reported by `prepare`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSummary {
    pub vertices: usize,
    pub arcs: usize,
    pub max_degree: usize,
    pub avg_degree: f64,
    pub min_weight: Option<u64>,
    pub max_weight: Option<u64>,
}

/// Result of reading an edge list.
#[derive(Clone, Debug)]
pub struct EdgeListLoad<W: Weight> {
    pub graph: WeightedGraph<W>,
    pub stats: BuildStats,
}

/// One parsed, not yet validated, edge-list line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeListRecord {
    pub u: u64,
    pub v: u64,
    pub w: Option<u64>,
}

fn parse_record(line_no: usize, line: &str, has_weights: bool) -> Result<Option<EdgeListRecord>, GraphError> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let tokens: Vec<&str> = trimmed.split_whitespace().collect();
    if tokens.len() < 2 || tokens.len() > 3 {
        return Err(GraphError::Parse {
            line: line_no,
            message: format!("expected `u v [w]`, found {} tokens", tokens.len()),
        });
    }
    let id = |tok: &str| {
        tok.parse::<u64>().map_err(|_| GraphError::Parse {
            line: line_no,
            message: format!("invalid vertex id `{tok}`"),
        })
    };
    let u = id(tokens[0])?;
    let v = id(tokens[1])?;
    let w = match tokens.get(2) {
        Some(tok) if has_weights => {
            let w: i128 = tok.parse().map_err(|_| GraphError::Parse {
                line: line_no,
                message: format!("invalid weight `{tok}`"),
            })?;
            if w <= 0 {
                return Err(GraphError::Domain(format!("line {line_no}: weight {w} is not positive")));
            }
            Some(u64::try_from(w).map_err(|_| {
                GraphError::Domain(format!("line {line_no}: weight {w} out of range"))
            })?)
        }
        _ => None,
    };
    Ok(Some(EdgeListRecord { u, v, w }))
}

/// Reads a whitespace-separated `u v [w]` edge list.
///
/// Vertex labels are remapped to dense ids in ascending label order. Missing
/// weights (or all weights when `has_weights` is false) default to 1.
pub fn load_edge_list<W: Weight, R: BufRead>(reader: R, has_weights: bool) -> Result<EdgeListLoad<W>, GraphError> {
    let mut records = Vec::new();
    let mut self_loops = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(rec) = parse_record(idx + 1, &line, has_weights)? {
            let w = rec.w.unwrap_or(1);
            let w = W::narrow(w).ok_or_else(|| {
                GraphError::Domain(format!("line {}: weight {w} exceeds storage range", idx + 1))
            })?;
            if rec.u == rec.v {
                self_loops += 1;
                continue;
            }
            records.push((rec.u, rec.v, w));
        }
    }

    let mut remap: BTreeMap<u64, VertexId> = BTreeMap::new();
    for &(u, v, _) in &records {
        remap.insert(u, 0);
        remap.insert(v, 0);
    }
    if remap.len() > VertexId::MAX as usize {
        return Err(GraphError::Domain("too many vertices".into()));
    }
    for (dense, slot) in remap.values_mut().enumerate() {
        *slot = dense as VertexId;
    }
    let labels: Vec<u64> = remap.keys().copied().collect();
    let edges = records.iter().map(|&(u, v, w)| (remap[&u], remap[&v], w));
    let (graph, mut stats) = WeightedGraph::from_edges_labeled(labels, edges);
    stats.self_loops_dropped += self_loops;
    Ok(EdgeListLoad { graph, stats })
}

/// Writes each undirected edge once as `label_u label_v w`.
pub fn write_edge_list<W: Weight, Wr: Write>(graph: &WeightedGraph<W>, mut out: Wr) -> std::io::Result<()> {
    writeln!(out, "# vertices {} arcs {}", graph.vertex_count(), graph.arc_count())?;
    for (u, v, w) in graph.edges() {
        writeln!(out, "{} {} {}", graph.label(u), graph.label(v), w)?;
    }
    Ok(())
}

/// Writes each undirected edge once using dense ids rather than labels.
pub fn write_dense_edge_list<W: Weight, Wr: Write>(graph: &WeightedGraph<W>, mut out: Wr) -> std::io::Result<()> {
    writeln!(out, "# vertices {} arcs {}", graph.vertex_count(), graph.arc_count())?;
    for (u, v, w) in graph.edges() {
        writeln!(out, "{u} {v} {w}")?;
    }
    Ok(())
}

/// Replaces every edge weight by a uniform draw from `[w_min, w_max]`.
///
/// Edges are visited in ascending `(min(u, v), max(u, v))` order so the result
/// depends only on topology, range and `rng_seed`.
pub fn synthesize_weights<W: Weight, W2: Weight>(
    graph: &WeightedGraph<W>,
    w_min: u64,
    w_max: u64,
    rng_seed: u64,
) -> Result<WeightedGraph<W2>, GraphError> {
    if w_min < 1 {
        return Err(GraphError::Domain(format!("w_min must be >= 1, got {w_min}")));
    }
    if w_max < w_min {
        return Err(GraphError::Domain(format!("w_max {w_max} < w_min {w_min}")));
    }
    if W2::narrow(w_max).is_none() {
        return Err(GraphError::Domain(format!("w_max {w_max} exceeds storage range")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut weights = vec![W2::zero(); graph.arc_count()];
    for u in 0..graph.vertex_count() {
        for idx in graph.offsets[u]..graph.offsets[u + 1] {
            let v = graph.targets[idx] as usize;
            if v <= u {
                continue;
            }
            let w = W2::narrow(rng.gen_range(w_min..=w_max)).expect("range checked");
            weights[idx] = w;
            let back = &graph.targets[graph.offsets[v]..graph.offsets[v + 1]];
            let rev = back.binary_search(&(u as VertexId)).expect("graph is symmetric");
            weights[graph.offsets[v] + rev] = w;
        }
    }
    Ok(WeightedGraph {
        offsets: graph.offsets.clone(),
        targets: graph.targets.clone(),
        weights,
        labels: graph.labels.clone(),
    })
}

/// Connected components, each sorted, ordered by smallest member.
pub fn connected_components<W: Weight>(graph: &WeightedGraph<W>) -> Vec<Vec<VertexId>> {
    let n = graph.vertex_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root as VertexId);
        let mut members = Vec::new();
        while let Some(u) = queue.pop_front() {
            members.push(u);
            for (v, _) in graph.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    queue.push_back(v);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// Vertex set of the largest component; ties go to the one with the smallest id.
pub fn largest_connected_component<W: Weight>(graph: &WeightedGraph<W>) -> Vec<VertexId> {
    let mut best: Vec<VertexId> = Vec::new();
    for component in connected_components(graph) {
        if component.len() > best.len() {
            best = component;
        }
    }
    best
}

/// Hop distances from `root`; `None` for vertices in other components.
pub fn bfs_levels<W: Weight>(graph: &WeightedGraph<W>, root: VertexId) -> Vec<Option<u32>> {
    let mut level = vec![None; graph.vertex_count()];
    level[root as usize] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let next = level[u as usize].unwrap() + 1;
        for (v, _) in graph.neighbors(u) {
            if level[v as usize].is_none() {
                level[v as usize] = Some(next);
                queue.push_back(v);
            }
        }
    }
    level
}

/// Vertex ownership: vertex `v` lives on partition `v mod partition_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionMap {
    partition_count: usize,
    vertex_count: usize,
}

impl PartitionMap {
    pub fn new(vertex_count: usize, partition_count: usize) -> Result<Self, GraphError> {
        if partition_count == 0 {
            return Err(GraphError::Domain("partition count must be at least 1".into()));
        }
        Ok(Self { partition_count, vertex_count })
    }

    pub fn for_graph<W: Weight>(graph: &WeightedGraph<W>, partition_count: usize) -> Result<Self, GraphError> {
        Self::new(graph.vertex_count(), partition_count)
    }

    pub fn partition_count(&self) -> usize {
        self.partition_count
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn owner(&self, v: VertexId) -> usize {
        v as usize % self.partition_count
    }

    /// Slot of `v` inside its owner's local storage.
    #[inline]
    pub fn local_index(&self, v: VertexId) -> usize {
        v as usize / self.partition_count
    }

    #[inline]
    pub fn global_id(&self, partition: usize, local: usize) -> VertexId {
        (local * self.partition_count + partition) as VertexId
    }

    /// Number of vertices owned by `partition`.
    pub fn local_len(&self, partition: usize) -> usize {
        if partition >= self.vertex_count {
            0
        } else {
            (self.vertex_count - partition).div_ceil(self.partition_count)
        }
    }

    pub fn owned(&self, partition: usize) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.local_len(partition)).map(move |i| self.global_id(partition, i))
    }
}
