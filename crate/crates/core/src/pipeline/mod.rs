//! Voronoi-cell Steiner tree pipeline.
//!
//! 1. label every vertex with its nearest seed ([`compute_voronoi_cells`]);
//! 2. find the cheapest bridging edge per pair of cells, first per partition
//!    then by all-reduce ([`local_min_dist_edges`], [`global_min_reduce`]);
//! 3. build the seed distance graph and its MST ([`build_distance_graph`],
//!    [`mst_prim`]);
//! 4. drop bridging edges whose seed pair is not an MST edge
//!    ([`prune_cross_cell_edges`]);
//! 5. trace predecessor chains from the surviving bridges back to their seeds
//!    ([`trace_tree_edges`]).
//!
//! The resulting tree weighs at most the MST of the seed distance graph, which
//! keeps it within `2 (1 - 1/|S|)` of the optimum.

mod cross_cell;
mod mst;
mod trace;
mod voronoi;

use std::time::Instant;

pub use cross_cell::{
    build_distance_graph, global_min_reduce, local_min_dist_edges, prune_cross_cell_edges, CrossCellEdge,
    CrossCellEdgeMap, DistanceEdge, DistanceGraph, LocalScan, SeedPair,
};
pub(crate) use cross_cell::bridge;
pub use mst::mst_prim;
pub use trace::trace_tree_edges;
pub use voronoi::{compute_voronoi_cells, Offer, VertexState, UNSET};

use crate::engine::{EngineConfig, EngineMetrics};
use crate::error::{normalize_seeds, SteinerError};
use crate::graph::{PartitionMap, VertexId, WeightedGraph};
use crate::tree::SteinerTree;
use crate::weight::Weight;

/// Phase labels used in metrics and reports.
pub mod phase {
    pub const VORONOI_CELL: &str = "voronoi_cell";
    pub const LOCAL_MIN_DIST_EDGE: &str = "local_min_dist_edge";
    pub const GLOBAL_MIN_DIST_EDGE: &str = "global_min_dist_edge";
    pub const MST: &str = "mst";
    pub const EDGE_PRUNING: &str = "edge_pruning";
    pub const TREE_EDGE: &str = "tree_edge";

    pub const ALL: [&str; 6] = [VORONOI_CELL, LOCAL_MIN_DIST_EDGE, GLOBAL_MIN_DIST_EDGE, MST, EDGE_PRUNING, TREE_EDGE];
}

/// Everything the pipeline produced besides the tree itself.
#[derive(Clone, Debug)]
pub struct SteinerSolution<W: Weight = u32> {
    pub tree: SteinerTree<W>,
    pub metrics: EngineMetrics,
    pub seeds: Vec<VertexId>,
    pub distance_graph: DistanceGraph,
    pub mst: Vec<DistanceEdge>,
    pub active: CrossCellEdgeMap,
    pub unlabelled_edges: u64,
}

impl<W: Weight> SteinerSolution<W> {
    pub fn mst_weight(&self) -> u64 {
        self.mst.iter().map(|e| e.weight).sum()
    }
}

/// Runs the whole pipeline on `graph` for `seeds`.
///
/// Phase metrics exclude input validation. The local scan reports one message
/// per edge whose far endpoint is remote (the label that has to be fetched),
/// the global reduction one message per local table entry when there is more
/// than one partition.
pub fn solve_steiner<W: Weight>(
    graph: &WeightedGraph<W>,
    seeds: &[VertexId],
    config: &EngineConfig,
) -> Result<SteinerSolution<W>, SteinerError> {
    let seeds = normalize_seeds(seeds, graph.vertex_count())?;
    let partitions = PartitionMap::for_graph(graph, config.partition_count)?;
    let mut metrics = EngineMetrics::new();

    let states = compute_voronoi_cells(graph, &seeds, config, &mut metrics)?;

    let started = Instant::now();
    let scan = local_min_dist_edges(graph, &states, &partitions, config.lanes);
    let stats = metrics.phase_mut(phase::LOCAL_MIN_DIST_EDGE);
    stats.messages_sent += scan.remote_reads;
    stats.remote_messages += scan.remote_reads;
    stats.messages_processed += scan.remote_reads;
    metrics.add_time(phase::LOCAL_MIN_DIST_EDGE, started.elapsed());

    let started = Instant::now();
    let global = global_min_reduce(&scan.maps);
    let exchanged: u64 =
        if partitions.partition_count() > 1 { scan.maps.iter().map(|m| m.len() as u64).sum() } else { 0 };
    let stats = metrics.phase_mut(phase::GLOBAL_MIN_DIST_EDGE);
    stats.messages_sent += exchanged;
    stats.remote_messages += exchanged;
    stats.messages_processed += exchanged;
    metrics.add_time(phase::GLOBAL_MIN_DIST_EDGE, started.elapsed());

    let started = Instant::now();
    let distance_graph = build_distance_graph(&global, &seeds);
    let mst = mst_prim(&distance_graph);
    metrics.add_time(phase::MST, started.elapsed());
    let mst = mst?;

    let started = Instant::now();
    let active = prune_cross_cell_edges(&global, &mst)?;
    metrics.add_time(phase::EDGE_PRUNING, started.elapsed());
    if active.len() + 1 != seeds.len() {
        return Err(SteinerError::Internal(format!("{} active bridges for {} seeds", active.len(), seeds.len())));
    }

    let tree = trace_tree_edges(graph, &states, &active, config, &mut metrics)?;

    Ok(SteinerSolution {
        tree,
        metrics,
        seeds,
        distance_graph,
        mst,
        active,
        unlabelled_edges: scan.unlabelled_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Lanes, QueueDiscipline};
    use crate::tree::validate_tree;

    fn configs() -> Vec<EngineConfig> {
        let mut out = Vec::new();
        for p in [1, 2, 4, 8] {
            for d in [QueueDiscipline::Fifo, QueueDiscipline::MinPriority] {
                for l in [Lanes::Single, Lanes::PerPartition] {
                    out.push(EngineConfig::new(p, d, l));
                }
            }
        }
        out
    }

    fn edges(t: &SteinerTree<u32>) -> Vec<(u32, u32, u32)> {
        t.edges().map(|e| (e.u, e.v, e.weight)).collect()
    }

    #[test]
    fn path_graph_end_to_end() {
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).0;
        for cfg in configs() {
            let sol = solve_steiner(&g, &[3, 0], &cfg).unwrap();
            assert_eq!(edges(&sol.tree), vec![(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
            assert_eq!(sol.tree.total_distance(), 3);
            assert_eq!(sol.distance_graph.edges, vec![DistanceEdge { s: 0, t: 3, weight: 3 }]);
            assert_eq!(sol.active.len(), 1);
            assert!(validate_tree(&sol.tree, &sol.seeds, &g).all_passed());
        }
    }

    #[test]
    fn star_uses_the_center() {
        let g = WeightedGraph::<u32>::from_edges(4, [(3, 0, 1), (3, 1, 1), (3, 2, 1)]).0;
        for cfg in configs() {
            let sol = solve_steiner(&g, &[0, 1, 2], &cfg).unwrap();
            assert_eq!(sol.tree.total_distance(), 3);
            assert_eq!(sol.tree.edge_count(), 3);
            assert!(sol.tree.vertices().contains(&3));
            assert!(validate_tree(&sol.tree, &sol.seeds, &g).all_passed());
        }
    }

    #[test]
    fn single_seed_gives_empty_tree() {
        let g = WeightedGraph::<u32>::from_edges(3, [(0, 1, 2), (1, 2, 2)]).0;
        let sol = solve_steiner(&g, &[1], &EngineConfig::default()).unwrap();
        assert_eq!(sol.tree.edge_count(), 0);
        assert_eq!(sol.tree.total_distance(), 0);
    }

    #[test]
    fn adjacent_seeds_take_the_direct_edge() {
        let g = WeightedGraph::<u32>::from_edges(3, [(0, 1, 2), (0, 2, 2), (2, 1, 2)]).0;
        let sol = solve_steiner(&g, &[0, 1], &EngineConfig::default()).unwrap();
        assert_eq!(edges(&sol.tree), vec![(0, 1, 2)]);
    }

    #[test]
    fn two_seed_pruning_keeps_the_map() {
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).0;
        let sol = solve_steiner(&g, &[0, 3], &EngineConfig::default()).unwrap();
        let global = build_distance_graph(&sol.active, &sol.seeds);
        assert_eq!(global, sol.distance_graph);
    }

    #[test]
    fn errors_surface() {
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (2, 3, 1)]).0;
        let cfg = EngineConfig::default();
        assert!(matches!(solve_steiner(&g, &[], &cfg), Err(SteinerError::EmptySeeds)));
        match solve_steiner(&g, &[0, 3], &cfg) {
            Err(SteinerError::SeedsDisconnected { unreached }) => assert_eq!(unreached, vec![3]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(solve_steiner(&g, &[0, 9], &cfg), Err(SteinerError::SeedOutOfRange { .. })));
    }

    #[test]
    fn all_phases_are_reported_in_order() {
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).0;
        let sol = solve_steiner(&g, &[0, 3], &EngineConfig::new(2, QueueDiscipline::Fifo, Lanes::Single)).unwrap();
        let labels: Vec<&str> = sol.metrics.phases().map(|p| p.0).collect();
        assert_eq!(labels, phase::ALL.to_vec());
        for (_, p) in sol.metrics.phases() {
            assert_eq!(p.messages_sent, p.messages_processed);
        }
    }
}
