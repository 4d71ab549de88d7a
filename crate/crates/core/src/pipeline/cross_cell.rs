//! Cross-cell edges, the seed distance graph and post-MST pruning.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::engine::{all_reduce_min, for_each_partition, Lanes};
use crate::error::SteinerError;
use crate::graph::{PartitionMap, VertexId, WeightedGraph};
use crate::pipeline::voronoi::VertexState;
use crate::weight::Weight;

/// Unordered pair of distinct seeds stored as `(low, high)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeedPair {
    pub s: VertexId,
    pub t: VertexId,
}

impl SeedPair {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        debug_assert_ne!(a, b);
        Self { s: a.min(b), t: a.max(b) }
    }
}

/// Bridging edge `(u, v)` with `u` in the cell of the pair's `s` and `v` in
/// the cell of its `t`, carrying `dist(u) + d(u, v) + dist(v)`.
///
/// Ordered by `(distance, min(u, v), max(u, v))`, a total order over the
/// edges of one seed pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CrossCellEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub distance: u64,
}

impl CrossCellEdge {
    fn rank(&self) -> (u64, VertexId, VertexId) {
        (self.distance, self.u.min(self.v), self.u.max(self.v))
    }
}

impl Ord for CrossCellEdge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for CrossCellEdge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Best bridging edge per seed pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossCellEdgeMap {
    entries: BTreeMap<SeedPair, CrossCellEdge>,
}

impl CrossCellEdgeMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keeps `edge` if it beats the current entry for `pair`.
    pub fn offer(&mut self, pair: SeedPair, edge: CrossCellEdge) {
        match self.entries.get_mut(&pair) {
            Some(current) if edge < *current => *current = edge,
            Some(_) => {}
            None => {
                self.entries.insert(pair, edge);
            }
        }
    }

    pub fn get(&self, pair: &SeedPair) -> Option<&CrossCellEdge> {
        self.entries.get(pair)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SeedPair, &CrossCellEdge)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(SeedPair, CrossCellEdge)> for CrossCellEdgeMap {
    fn from_iter<I: IntoIterator<Item = (SeedPair, CrossCellEdge)>>(iter: I) -> Self {
        let mut map = CrossCellEdgeMap::new();
        for (pair, edge) in iter {
            map.offer(pair, edge);
        }
        map
    }
}

/// Candidate for edge `{a, b}`, or `None` if it is not cross-cell.
#[inline]
pub(crate) fn bridge<W: Weight>(
    states: &[VertexState],
    a: VertexId,
    b: VertexId,
    w: W,
) -> Option<(SeedPair, CrossCellEdge)> {
    let (sa, sb) = (&states[a as usize], &states[b as usize]);
    if !sa.is_set() || !sb.is_set() || sa.src == sb.src {
        return None;
    }
    let distance = sa.dist + w.widen() + sb.dist;
    let (u, v) = if sa.src < sb.src { (a, b) } else { (b, a) };
    Some((SeedPair::new(sa.src, sb.src), CrossCellEdge { u, v, distance }))
}

/// Outcome of the per-partition scan.
#[derive(Clone, Debug, Default)]
pub struct LocalScan {
    pub maps: Vec<CrossCellEdgeMap>,
    /// Edges skipped because an endpoint was never labelled.
    pub unlabelled_edges: u64,
    /// Edges whose far endpoint lives on another partition; each needs that
    /// endpoint's `(src, dist)` shipped over.
    pub remote_reads: u64,
}

/// Per-partition minimum bridging edge for every seed pair.
///
/// Partition `p` scans the edges `{u, v}` with `u < v` whose lower endpoint
/// it owns.
pub fn local_min_dist_edges<W: Weight>(
    graph: &WeightedGraph<W>,
    states: &[VertexState],
    partitions: &PartitionMap,
    lanes: Lanes,
) -> LocalScan {
    let results = for_each_partition(partitions, lanes, |p| {
        let mut map = CrossCellEdgeMap::new();
        let mut unlabelled = 0u64;
        let mut remote = 0u64;
        for u in partitions.owned(p) {
            for (v, w) in graph.neighbors(u) {
                if v <= u {
                    continue;
                }
                if partitions.owner(v) != p {
                    remote += 1;
                }
                if !states[u as usize].is_set() || !states[v as usize].is_set() {
                    unlabelled += 1;
                    continue;
                }
                if let Some((pair, edge)) = bridge(states, u, v, w) {
                    map.offer(pair, edge);
                }
            }
        }
        (map, unlabelled, remote)
    });
    let mut scan = LocalScan::default();
    for (map, unlabelled, remote) in results {
        scan.maps.push(map);
        scan.unlabelled_edges += unlabelled;
        scan.remote_reads += remote;
    }
    scan
}

/// All-reduce of the local maps under the cross-cell edge order.
pub fn global_min_reduce(local_maps: &[CrossCellEdgeMap]) -> CrossCellEdgeMap {
    let tables: Vec<BTreeMap<SeedPair, CrossCellEdge>> = local_maps.iter().map(|m| m.entries.clone()).collect();
    CrossCellEdgeMap { entries: all_reduce_min(&tables) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DistanceEdge {
    pub s: VertexId,
    pub t: VertexId,
    pub weight: u64,
}

/// Graph on the seeds with one edge per bridged seed pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceGraph {
    pub seeds: Vec<VertexId>,
    pub edges: Vec<DistanceEdge>,
}

pub fn build_distance_graph(global: &CrossCellEdgeMap, seeds: &[VertexId]) -> DistanceGraph {
    let edges = global.iter().map(|(pair, e)| DistanceEdge { s: pair.s, t: pair.t, weight: e.distance }).collect();
    DistanceGraph { seeds: seeds.to_vec(), edges }
}

/// Keeps only the entries whose seed pair is an MST edge.
pub fn prune_cross_cell_edges(
    global: &CrossCellEdgeMap,
    mst_edges: &[DistanceEdge],
) -> Result<CrossCellEdgeMap, SteinerError> {
    let mut active = CrossCellEdgeMap::new();
    for e in mst_edges {
        let pair = SeedPair::new(e.s, e.t);
        let edge = global
            .get(&pair)
            .ok_or_else(|| SteinerError::Internal(format!("MST edge ({}, {}) has no bridging edge", e.s, e.t)))?;
        active.offer(pair, *edge);
    }
    Ok(active)
}
