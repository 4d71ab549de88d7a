//! Tree edge tracing: from both endpoints of every active bridging edge,
//! follow predecessors back to the owning seed.

use crate::engine::{run_to_quiescence, EngineConfig, EngineMetrics, Outbox, PartitionedState, VertexProgram, Visitor};
use crate::error::SteinerError;
use crate::graph::{PartitionMap, VertexId, WeightedGraph};
use crate::pipeline::cross_cell::CrossCellEdgeMap;
use crate::pipeline::voronoi::{VertexState, UNSET};
use crate::tree::{SteinerTree, TreeEdge};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug)]
struct TraceState {
    src: VertexId,
    pred: VertexId,
    /// `(pred, v)` belongs to the tree.
    on_tree: bool,
}

struct TraceProgram;

impl VertexProgram for TraceProgram {
    type State = TraceState;
    type Payload = ();

    fn visit(&self, visitor: Visitor<()>, state: &mut TraceState, out: &mut Outbox<()>) {
        let v = visitor.target;
        // Seeds end a chain; an already marked vertex means the rest of the chain is traced.
        if state.on_tree || state.src == v {
            return;
        }
        state.on_tree = true;
        if state.pred != state.src && state.pred != UNSET {
            out.send(Visitor { target: state.pred, sender: v, payload: (), priority: 0 });
        }
    }
}

/// Builds the final tree from the pruned bridging edges and the Voronoi
/// predecessor forest.
pub fn trace_tree_edges<W: Weight>(
    graph: &WeightedGraph<W>,
    states: &[VertexState],
    active: &CrossCellEdgeMap,
    config: &EngineConfig,
    metrics: &mut EngineMetrics,
) -> Result<SteinerTree<W>, SteinerError> {
    let map = PartitionMap::for_graph(graph, config.partition_count)?;
    let mut trace = PartitionedState::from_fn(map, |v| {
        let s = &states[v as usize];
        TraceState { src: s.src, pred: s.pred, on_tree: false }
    });

    let mut edges = Vec::with_capacity(active.len());
    let mut initial = Vec::with_capacity(2 * active.len());
    for (_, bridge) in active.iter() {
        let w = graph.weight(bridge.u, bridge.v).ok_or_else(|| {
            SteinerError::Internal(format!("bridging edge ({}, {}) is not in the graph", bridge.u, bridge.v))
        })?;
        edges.push(TreeEdge::new(bridge.u, bridge.v, w));
        initial.push(Visitor { target: bridge.u, sender: bridge.v, payload: (), priority: 0 });
        initial.push(Visitor { target: bridge.v, sender: bridge.u, payload: (), priority: 0 });
    }
    run_to_quiescence(&TraceProgram, &mut trace, config, graph.arc_count(), initial, super::phase::TREE_EDGE, metrics)?;

    for (v, t) in trace.into_global().into_iter().enumerate() {
        if !t.on_tree {
            continue;
        }
        let v = v as VertexId;
        let corrupted = |reason: String| SteinerError::CorruptedState { vertex: v, reason };
        if t.pred == UNSET {
            return Err(corrupted("traced vertex has no predecessor".into()));
        }
        let w = graph
            .weight(t.pred, v)
            .ok_or_else(|| corrupted(format!("predecessor {} is not adjacent", t.pred)))?;
        let (here, there) = (&states[v as usize], &states[t.pred as usize]);
        // Strictly decreasing distances along predecessor links rule out cycles.
        if there.src != here.src || there.dist + w.widen() != here.dist {
            return Err(corrupted(format!("predecessor {} does not lie on a shortest path to seed {}", t.pred, here.src)));
        }
        edges.push(TreeEdge::new(t.pred, v, w));
    }
    Ok(SteinerTree::from_edges(edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::cross_cell::{CrossCellEdge, SeedPair};

    #[test]
    fn corrupted_predecessor_is_rejected() {
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).0;
        let mut states = vec![
            VertexState::seed(0),
            VertexState { src: 0, pred: 0, dist: 1 },
            VertexState { src: 3, pred: 3, dist: 1 },
            VertexState::seed(3),
        ];
        // 1 claims a distance its predecessor cannot justify.
        states[1].dist = 5;
        let active: CrossCellEdgeMap = [(SeedPair::new(0, 3), CrossCellEdge { u: 1, v: 2, distance: 3 })].into_iter().collect();
        let err = trace_tree_edges(&g, &states, &active, &EngineConfig::default(), &mut EngineMetrics::new());
        assert!(matches!(err, Err(SteinerError::CorruptedState { vertex: 1, .. })));
    }

    #[test]
    fn shared_segments_are_traced_once() {
        // Seed 0 with chain 0-1-2; seeds 3 and 4 hang off 2.
        let g = WeightedGraph::<u32>::from_edges(5, [(0, 1, 1), (1, 2, 1), (2, 3, 5), (2, 4, 5)]).0;
        let states = vec![
            VertexState::seed(0),
            VertexState { src: 0, pred: 0, dist: 1 },
            VertexState { src: 0, pred: 1, dist: 2 },
            VertexState::seed(3),
            VertexState::seed(4),
        ];
        let active: CrossCellEdgeMap = [
            (SeedPair::new(0, 3), CrossCellEdge { u: 2, v: 3, distance: 7 }),
            (SeedPair::new(0, 4), CrossCellEdge { u: 2, v: 4, distance: 7 }),
        ]
        .into_iter()
        .collect();
        let mut m = EngineMetrics::new();
        let t = trace_tree_edges(&g, &states, &active, &EngineConfig::default(), &mut m).unwrap();
        assert_eq!(t.edge_count(), 4);
        assert_eq!(t.total_distance(), 12);
        // 4 initial visitors, one forward hop 2 -> 1.
        assert_eq!(m.phase(crate::pipeline::phase::TREE_EDGE).unwrap().messages_sent, 5);
    }
}
