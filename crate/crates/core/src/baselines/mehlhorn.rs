use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::error::{normalize_seeds, SteinerError};
use crate::graph::{VertexId, WeightedGraph};
use crate::pipeline::{bridge, CrossCellEdge, SeedPair, VertexState};
use crate::tree::{SteinerTree, TreeEdge};
use crate::weight::Weight;

use super::finish_tree;

/// Multi-source Dijkstra producing the lexicographically smallest
/// `(dist, src, pred)` label per vertex.
fn voronoi_dijkstra<W: Weight>(graph: &WeightedGraph<W>, seeds: &[VertexId]) -> Vec<VertexState> {
    let n = graph.vertex_count();
    let mut state = vec![VertexState::UNREACHED; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in seeds {
        state[s as usize] = VertexState::seed(s);
        heap.push(Reverse((0u64, s, s, s)));
    }
    while let Some(Reverse((d, src, _, u))) = heap.pop() {
        if done[u as usize] {
            continue;
        }
        done[u as usize] = true;
        for (v, w) in graph.neighbors(u) {
            let slot = v as usize;
            if done[slot] {
                continue;
            }
            let cand = VertexState { dist: d + w.widen(), src, pred: u };
            let cur = state[slot];
            if (cand.dist, cand.src, cand.pred) < (cur.dist, cur.src, cur.pred) {
                state[slot] = cand;
                heap.push(Reverse((cand.dist, cand.src, cand.pred, v)));
            }
        }
    }
    state
}

/// Unique spanning tree of the seed graph under the `(weight, s, t)` order.
fn kruskal_pairs(
    seeds: &[VertexId],
    bridges: &BTreeMap<SeedPair, CrossCellEdge>,
) -> Result<Vec<SeedPair>, SteinerError> {
    let mut order: Vec<(u64, SeedPair)> = bridges.iter().map(|(p, e)| (e.distance, *p)).collect();
    order.sort_unstable();
    let index: BTreeMap<VertexId, usize> = seeds.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut parent: Vec<usize> = (0..seeds.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let mut picked = Vec::new();
    for (_, pair) in order {
        let (a, b) = (find(&mut parent, index[&pair.s]), find(&mut parent, index[&pair.t]));
        if a != b {
            parent[a] = b;
            picked.push(pair);
        }
    }
    if picked.len() + 1 < seeds.len() {
        let root = find(&mut parent, 0);
        let unreached = (0..seeds.len()).filter(|&i| find(&mut parent, i) != root).map(|i| seeds[i]).collect();
        return Err(SteinerError::SeedsDisconnected { unreached });
    }
    Ok(picked)
}

/// Single-threaded Mehlhorn: Voronoi regions by multi-source Dijkstra,
/// bridged seed graph, MST, path expansion, MST and leaf pruning.
///
/// Uses the same tie-breaking as the parallel pipeline, so both return the
/// same tree.
pub fn mehlhorn_steiner<W: Weight>(graph: &WeightedGraph<W>, seeds: &[VertexId]) -> Result<SteinerTree<W>, SteinerError> {
    let seeds = normalize_seeds(seeds, graph.vertex_count())?;
    let states = voronoi_dijkstra(graph, &seeds);

    let mut bridges: BTreeMap<SeedPair, CrossCellEdge> = BTreeMap::new();
    for (u, v, w) in graph.edges() {
        if let Some((pair, edge)) = bridge(&states, u, v, w) {
            bridges.entry(pair).and_modify(|cur| *cur = (*cur).min(edge)).or_insert(edge);
        }
    }
    let mst = kruskal_pairs(&seeds, &bridges)?;

    let mut expanded: BTreeSet<TreeEdge<W>> = BTreeSet::new();
    for pair in mst {
        let e = bridges[&pair];
        expanded.insert(TreeEdge::new(e.u, e.v, graph.weight(e.u, e.v).expect("bridge is a graph edge")));
        for start in [e.u, e.v] {
            let mut cur = start;
            loop {
                let s = states[cur as usize];
                if s.pred == cur {
                    break;
                }
                let w = graph.weight(s.pred, cur).expect("predecessor is adjacent");
                if !expanded.insert(TreeEdge::new(s.pred, cur, w)) {
                    break;
                }
                cur = s.pred;
            }
        }
    }
    Ok(finish_tree(&expanded, &seeds))
}
