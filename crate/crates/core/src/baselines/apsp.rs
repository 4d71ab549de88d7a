use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{normalize_seeds, SteinerError};
use crate::graph::{VertexId, WeightedGraph};
use crate::pipeline::UNSET;
use crate::tree::TreeEdge;
use crate::weight::{Weight, INFINITY};

/// Shortest-path distances between all seed pairs plus one shortest-path
/// tree per seed for path expansion.
#[derive(Clone, Debug)]
pub struct SeedDistanceGraph {
    pub seeds: Vec<VertexId>,
    /// Row-major `seeds.len()` square matrix.
    dist: Vec<u64>,
    pred: Vec<Vec<VertexId>>,
}

impl SeedDistanceGraph {
    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    /// Distance between the `i`-th and `j`-th seed.
    pub fn distance(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.seeds.len() + j]
    }

    /// Edges of the shortest path from seed `i` to vertex `target`.
    pub fn path_edges<'a, W: Weight>(
        &'a self,
        graph: &'a WeightedGraph<W>,
        i: usize,
        target: VertexId,
    ) -> impl Iterator<Item = TreeEdge<W>> + 'a {
        let pred = &self.pred[i];
        let mut cur = target;
        std::iter::from_fn(move || {
            let p = pred[cur as usize];
            if p == UNSET || p == cur {
                return None;
            }
            let w = graph.weight(p, cur).expect("predecessor is adjacent");
            let e = TreeEdge::new(p, cur, w);
            cur = p;
            Some(e)
        })
    }
}

/// Dijkstra from `source`; equal-distance ties keep the smaller predecessor.
pub(crate) fn dijkstra<W: Weight>(graph: &WeightedGraph<W>, source: VertexId) -> (Vec<u64>, Vec<VertexId>) {
    let n = graph.vertex_count();
    let mut dist = vec![INFINITY; n];
    let mut pred = vec![UNSET; n];
    let mut done = vec![false; n];
    dist[source as usize] = 0;
    pred[source as usize] = source;
    let mut heap = BinaryHeap::from([Reverse((0u64, source))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u as usize] {
            continue;
        }
        done[u as usize] = true;
        for (v, w) in graph.neighbors(u) {
            let nd = d + w.widen();
            let slot = v as usize;
            if nd < dist[slot] || (nd == dist[slot] && !done[slot] && u < pred[slot]) {
                if nd < dist[slot] {
                    heap.push(Reverse((nd, v)));
                }
                dist[slot] = nd;
                pred[slot] = u;
            }
        }
    }
    (dist, pred)
}

/// One Dijkstra per seed.
pub fn apsp_seeds<W: Weight>(graph: &WeightedGraph<W>, seeds: &[VertexId]) -> Result<SeedDistanceGraph, SteinerError> {
    let seeds = normalize_seeds(seeds, graph.vertex_count())?;
    let k = seeds.len();
    let mut dist = vec![0u64; k * k];
    let mut pred = Vec::with_capacity(k);
    for (i, &s) in seeds.iter().enumerate() {
        let (d, p) = dijkstra(graph, s);
        for (j, &t) in seeds.iter().enumerate() {
            dist[i * k + j] = d[t as usize];
        }
        pred.push(p);
    }
    let unreached: Vec<VertexId> = (1..k).filter(|&j| dist[j] == INFINITY).map(|j| seeds[j]).collect();
    if !unreached.is_empty() {
        return Err(SteinerError::SeedsDisconnected { unreached });
    }
    Ok(SeedDistanceGraph { seeds, dist, pred })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_distances() {
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).0;
        let a = apsp_seeds(&g, &[0, 3]).unwrap();
        assert_eq!(a.distance(0, 1), 3);
        assert_eq!(a.distance(1, 0), 3);
        assert_eq!(a.distance(0, 0), 0);
        let path: Vec<_> = a.path_edges(&g, 0, 3).collect();
        assert_eq!(path.len(), 3);
    }

    #[test]
    fn singleton_and_complete() {
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]).0;
        let one = apsp_seeds(&g, &[2]).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.distance(0, 0), 0);
        let all = apsp_seeds(&g, &[0, 1, 2, 3]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(all.distance(i, j), u64::from(i != j));
            }
        }
    }

    #[test]
    fn disconnected_pair_errors() {
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (2, 3, 1)]).0;
        assert!(matches!(apsp_seeds(&g, &[0, 2]), Err(SteinerError::SeedsDisconnected { .. })));
    }
}
