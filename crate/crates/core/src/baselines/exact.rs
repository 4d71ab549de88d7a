use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{normalize_seeds, SteinerError};
use crate::graph::{bfs_levels, VertexId, WeightedGraph};
use crate::tree::{SteinerTree, TreeEdge};
use crate::weight::{Weight, INFINITY};

/// Instance size limits for the exact oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_seeds: usize,
    pub max_vertices: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        Self { max_seeds: 12, max_vertices: 5000 }
    }
}

#[derive(Clone, Copy)]
enum Back {
    None,
    Leaf,
    Split(u32),
    Edge(VertexId),
}

/// Optimal Steiner tree by Dreyfus-Wagner dynamic programming.
///
/// `cost[mask][v]` is the cheapest tree joining the terminals in `mask` and
/// `v`. The last seed serves as the root, so masks only range over the other
/// seeds. Runs in `O(3^k n + 2^k (m + n) log n)`.
pub fn exact_steiner<W: Weight>(
    graph: &WeightedGraph<W>,
    seeds: &[VertexId],
    limits: ExactLimits,
) -> Result<(u64, SteinerTree<W>), SteinerError> {
    let seeds = normalize_seeds(seeds, graph.vertex_count())?;
    if seeds.len() > limits.max_seeds {
        return Err(SteinerError::OracleRefused(format!("{} seeds exceed the limit of {}", seeds.len(), limits.max_seeds)));
    }
    if graph.vertex_count() > limits.max_vertices {
        return Err(SteinerError::OracleRefused(format!(
            "{} vertices exceed the limit of {}",
            graph.vertex_count(),
            limits.max_vertices
        )));
    }
    let levels = bfs_levels(graph, seeds[0]);
    let unreached: Vec<VertexId> = seeds.iter().copied().filter(|&s| levels[s as usize].is_none()).collect();
    if !unreached.is_empty() {
        return Err(SteinerError::SeedsDisconnected { unreached });
    }
    if seeds.len() == 1 {
        return Ok((0, SteinerTree::empty()));
    }

    let n = graph.vertex_count();
    let (terminals, root) = seeds.split_at(seeds.len() - 1);
    let root = root[0];
    let k = terminals.len();
    let masks = 1usize << k;
    let mut cost = vec![INFINITY; masks * n];
    let mut back = vec![Back::None; masks * n];

    for mask in 1..masks {
        let row = mask * n;
        if mask.is_power_of_two() {
            let t = terminals[mask.trailing_zeros() as usize] as usize;
            cost[row + t] = 0;
            back[row + t] = Back::Leaf;
        } else {
            let low = mask & mask.wrapping_neg();
            // Enumerate splits once: the part holding the lowest bit.
            let rest = mask ^ low;
            let mut sub = rest;
            loop {
                let a = sub | low;
                if a != mask {
                    let b = mask ^ a;
                    for v in 0..n {
                        let (ca, cb) = (cost[a * n + v], cost[b * n + v]);
                        if ca != INFINITY && cb != INFINITY && ca + cb < cost[row + v] {
                            cost[row + v] = ca + cb;
                            back[row + v] = Back::Split(a as u32);
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }

        // Grow along edges from every finite entry.
        let mut heap: BinaryHeap<Reverse<(u64, VertexId)>> =
            (0..n).filter(|&v| cost[row + v] != INFINITY).map(|v| Reverse((cost[row + v], v as VertexId))).collect();
        let mut settled = vec![false; n];
        while let Some(Reverse((d, u))) = heap.pop() {
            if settled[u as usize] || d != cost[row + u as usize] {
                continue;
            }
            settled[u as usize] = true;
            for (v, w) in graph.neighbors(u) {
                let nd = d + w.widen();
                if nd < cost[row + v as usize] {
                    cost[row + v as usize] = nd;
                    back[row + v as usize] = Back::Edge(u);
                    heap.push(Reverse((nd, v)));
                }
            }
        }
    }

    let full = masks - 1;
    let optimum = cost[full * n + root as usize];
    debug_assert_ne!(optimum, INFINITY);

    let mut edges: BTreeSet<TreeEdge<W>> = BTreeSet::new();
    let mut stack = vec![(full, root)];
    while let Some((mask, v)) = stack.pop() {
        match back[mask * n + v as usize] {
            Back::Leaf => {}
            Back::None => unreachable!("finite entry without provenance"),
            Back::Split(a) => {
                stack.push((a as usize, v));
                stack.push((mask ^ a as usize, v));
            }
            Back::Edge(u) => {
                edges.insert(TreeEdge::new(u, v, graph.weight(u, v).expect("DP edge exists")));
                stack.push((mask, u));
            }
        }
    }
    let tree = SteinerTree::from_edges(edges);
    // Any overlap in the reconstruction would make a cheaper connected cover.
    debug_assert_eq!(tree.total_distance(), optimum);
    Ok((optimum, tree))
}
