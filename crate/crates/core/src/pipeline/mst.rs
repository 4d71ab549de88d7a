use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::SteinerError;
use crate::graph::VertexId;
use crate::pipeline::cross_cell::{DistanceEdge, DistanceGraph};

/// Sequential lazy Prim over the seed distance graph.
///
/// Edges are compared by `(weight, s, t)`, so the spanning tree is unique
/// and independent of edge listing order. Returns edges sorted by `(s, t)`.
pub fn mst_prim(graph: &DistanceGraph) -> Result<Vec<DistanceEdge>, SteinerError> {
    let k = graph.seeds.len();
    if k == 0 {
        return Err(SteinerError::EmptySeeds);
    }
    let index: HashMap<VertexId, usize> = graph.seeds.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut adjacency: Vec<Vec<(usize, DistanceEdge)>> = vec![Vec::new(); k];
    for e in &graph.edges {
        let (Some(&a), Some(&b)) = (index.get(&e.s), index.get(&e.t)) else {
            return Err(SteinerError::Internal(format!("distance edge ({}, {}) has a non-seed endpoint", e.s, e.t)));
        };
        let canon = DistanceEdge { s: e.s.min(e.t), t: e.s.max(e.t), weight: e.weight };
        adjacency[a].push((b, canon));
        adjacency[b].push((a, canon));
    }

    let mut in_tree = vec![false; k];
    let mut heap = BinaryHeap::new();
    let mut tree = Vec::with_capacity(k.saturating_sub(1));
    let grow = |i: usize, in_tree: &mut Vec<bool>, heap: &mut BinaryHeap<_>| {
        in_tree[i] = true;
        for &(j, e) in &adjacency[i] {
            if !in_tree[j] {
                heap.push(Reverse(((e.weight, e.s, e.t), j, e)));
            }
        }
    };
    grow(0, &mut in_tree, &mut heap);
    while let Some(Reverse((_, j, e))) = heap.pop() {
        if in_tree[j] {
            continue;
        }
        tree.push(e);
        grow(j, &mut in_tree, &mut heap);
    }

    if tree.len() + 1 < k {
        let unreached = graph.seeds.iter().zip(&in_tree).filter(|(_, &t)| !t).map(|(&s, _)| s).collect();
        return Err(SteinerError::SeedsDisconnected { unreached });
    }
    tree.sort_unstable_by_key(|e| (e.s, e.t));
    Ok(tree)
}
