//! Voronoi cell labelling as an asynchronous Bellman-Ford style relaxation.
//!
//! Every seed announces itself to its neighbors; a vertex adopts an incoming
//! offer `(r, t)` from neighbor `p` when `(r, t, p)` is lexicographically
//! smaller than its current `(dist, src, pred)`, and re-announces only when
//! `(dist, src)` changed. Labels decrease monotonically under a total order,
//! so the fixpoint does not depend on message order, partitioning or queue
//! discipline.

use serde::{Deserialize, Serialize};

use crate::engine::{
    broadcast_init, run_to_quiescence, EngineConfig, EngineMetrics, Outbox, PartitionedState, VertexProgram, Visitor,
};
use crate::error::SteinerError;
use crate::graph::{PartitionMap, VertexId, WeightedGraph};
use crate::weight::{Weight, INFINITY};

/// Marker for an unset `src` or `pred`.
pub const UNSET: VertexId = VertexId::MAX;

/// Per-vertex Voronoi label: owning seed, predecessor toward it, distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexState {
    pub src: VertexId,
    pub pred: VertexId,
    pub dist: u64,
}

impl VertexState {
    pub const UNREACHED: VertexState = VertexState { src: UNSET, pred: UNSET, dist: INFINITY };

    pub fn seed(v: VertexId) -> Self {
        VertexState { src: v, pred: v, dist: 0 }
    }

    pub fn is_set(&self) -> bool {
        self.src != UNSET
    }

    pub fn is_seed(&self, v: VertexId) -> bool {
        self.src == v && self.dist == 0
    }

    #[inline]
    fn key(&self) -> (u64, VertexId, VertexId) {
        (self.dist, self.src, self.pred)
    }
}

/// Tentative distance `dist` to seed `seed`, as announced by the sender.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Offer {
    pub seed: VertexId,
    pub dist: u64,
}

pub(crate) struct VoronoiProgram<'g, W: Weight> {
    pub(crate) graph: &'g WeightedGraph<W>,
}

impl<W: Weight> VertexProgram for VoronoiProgram<'_, W> {
    type State = VertexState;
    type Payload = Offer;

    fn visit(&self, visitor: Visitor<Offer>, state: &mut VertexState, out: &mut Outbox<Offer>) {
        let v = visitor.target;
        let announce = if visitor.sender == v {
            // Seed initialization; a seed's own cell is never reassigned.
            state.is_seed(v) && visitor.payload.dist == 0
        } else {
            let offer = (visitor.payload.dist, visitor.payload.seed, visitor.sender);
            if offer >= state.key() {
                return;
            }
            let relabel = (offer.0, offer.1) != (state.dist, state.src);
            *state = VertexState { dist: offer.0, src: offer.1, pred: offer.2 };
            relabel
        };
        if !announce {
            return;
        }
        for (u, w) in self.graph.neighbors(v) {
            // The sender already holds a label no worse than anything we could offer back.
            if u == visitor.sender {
                continue;
            }
            let r = state.dist + w.widen();
            out.send(Visitor { target: u, sender: v, payload: Offer { seed: state.src, dist: r }, priority: r });
        }
    }
}

/// Voronoi labels for every vertex; `seeds` must be sorted and distinct.
///
/// Vertices unreachable from every seed keep [`VertexState::UNREACHED`].
pub fn compute_voronoi_cells<W: Weight>(
    graph: &WeightedGraph<W>,
    seeds: &[VertexId],
    config: &EngineConfig,
    metrics: &mut EngineMetrics,
) -> Result<Vec<VertexState>, SteinerError> {
    let seeds = crate::error::normalize_seeds(seeds, graph.vertex_count())?;
    let map = PartitionMap::for_graph(graph, config.partition_count)?;
    let mut states = PartitionedState::from_fn(map, |v| {
        if seeds.binary_search(&v).is_ok() {
            VertexState::seed(v)
        } else {
            VertexState::UNREACHED
        }
    });
    let initial = broadcast_init(
        graph.vertex_count(),
        |v| seeds.binary_search(&v).is_ok(),
        |v| (Offer { seed: v, dist: 0 }, 0),
    );
    let program = VoronoiProgram { graph };
    run_to_quiescence(&program, &mut states, config, graph.arc_count(), initial, super::phase::VORONOI_CELL, metrics)?;
    Ok(states.into_global())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Lanes, QueueDiscipline};

    pub(crate) fn all_configs() -> Vec<EngineConfig> {
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

    fn cells(g: &WeightedGraph<u32>, seeds: &[u32]) -> Vec<Vec<VertexState>> {
        all_configs()
            .iter()
            .map(|cfg| compute_voronoi_cells(g, seeds, cfg, &mut EngineMetrics::new()).unwrap())
            .collect()
    }

    #[test]
    fn path_splits_in_the_middle() {
        // a-b-c-d as 0-1-2-3.
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).0;
        for s in cells(&g, &[0, 3]) {
            assert_eq!(s.iter().map(|x| x.src).collect::<Vec<_>>(), vec![0, 0, 3, 3]);
            assert_eq!(s.iter().map(|x| x.dist).collect::<Vec<_>>(), vec![0, 1, 1, 0]);
            assert_eq!(s[1].pred, 0);
            assert_eq!(s[2].pred, 3);
        }
    }

    #[test]
    fn single_seed_is_sssp() {
        let g = WeightedGraph::<u32>::from_edges(5, [(0, 1, 4), (0, 2, 1), (2, 1, 2), (1, 3, 5), (2, 3, 8)]).0;
        for s in cells(&g, &[0]) {
            assert_eq!(s.iter().map(|x| x.dist).collect::<Vec<_>>(), vec![0, 3, 1, 8, INFINITY]);
            assert_eq!(s[1].pred, 2);
            assert_eq!(s[3].pred, 1);
            assert!(!s[4].is_set());
        }
    }

    #[test]
    fn equidistant_vertex_joins_smaller_seed() {
        // 0 is two hops from seed 3 (via 1) and from seed 7 (via 2).
        let g = WeightedGraph::<u32>::from_edges(8, [(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 7, 1), (4, 5, 1)]).0;
        for s in cells(&g, &[3, 7]) {
            assert_eq!(s[0].dist, 2);
            assert_eq!(s[0].src, 3);
            assert_eq!(s[0].pred, 1);
        }
    }

    #[test]
    fn equal_label_ties_pick_smallest_predecessor() {
        // 3 reaches seed 0 at distance 2 through either 1 or 2.
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 2, 1), (0, 1, 1), (2, 3, 1), (1, 3, 1)]).0;
        for s in cells(&g, &[0]) {
            assert_eq!(s[3], VertexState { src: 0, pred: 1, dist: 2 });
        }
    }

    #[test]
    fn voronoi_messages_balance() {
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).0;
        let mut m = EngineMetrics::new();
        compute_voronoi_cells(&g, &[0, 3], &EngineConfig::default(), &mut m).unwrap();
        let p = m.phase(crate::pipeline::phase::VORONOI_CELL).unwrap();
        assert_eq!(p.messages_sent, p.messages_processed);
        // 2 initial + one announce from each seed + one from each relabelled middle vertex.
        assert_eq!(p.messages_sent, 6);
    }
}
