//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use petgraph::algo::{dijkstra, min_spanning_tree};
use petgraph::data::FromElements;
use petgraph::graph::{NodeIndex, UnGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steiner_core::generate::random_connected;
use steiner_core::{Graph, VertexId};

pub struct Instance {
    pub graph: Graph,
    pub seeds: Vec<VertexId>,
}

/// Random connected graph with `|V|` in `vertices`, `m` between 1.5 and 3
/// times `|V|`, weights in `[1, w_max]` and `|S|` in `seeds`.
pub fn instance(
    rng_seed: u64,
    vertices: std::ops::RangeInclusive<usize>,
    seeds: std::ops::RangeInclusive<usize>,
    w_max: u64,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let n = rng.gen_range(vertices);
    let m = (rng.gen_range(1.5..=3.0) * n as f64).round() as usize;
    let graph = random_connected::<u32>(n, m, 1, w_max, rng.gen()).unwrap();
    let k = rng.gen_range(seeds).min(n);
    let mut pool: Vec<VertexId> = (0..n as VertexId).collect();
    let mut picked = Vec::with_capacity(k);
    for _ in 0..k {
        picked.push(pool.swap_remove(rng.gen_range(0..pool.len())));
    }
    picked.sort_unstable();
    Instance { graph, seeds: picked }
}

pub fn to_petgraph(g: &Graph) -> UnGraph<(), u64> {
    let mut pg = UnGraph::with_capacity(g.vertex_count(), g.edge_count());
    for _ in 0..g.vertex_count() {
        pg.add_node(());
    }
    for (u, v, w) in g.edges() {
        pg.add_edge(NodeIndex::new(u as usize), NodeIndex::new(v as usize), u64::from(w));
    }
    pg
}

pub fn sssp(pg: &UnGraph<(), u64>, source: VertexId) -> Vec<Option<u64>> {
    let map = dijkstra(pg, NodeIndex::new(source as usize), None, |e| *e.weight());
    (0..pg.node_count()).map(|v| map.get(&NodeIndex::new(v)).copied()).collect()
}

/// Expected `(dist, src, pred)` per vertex: nearest seed with ties to the
/// smallest id, then the smallest neighbour on a shortest path from it.
pub fn voronoi_oracle(g: &Graph, seeds: &[VertexId]) -> Vec<Option<(u64, VertexId, VertexId)>> {
    let pg = to_petgraph(g);
    let per_seed: Vec<Vec<Option<u64>>> = seeds.iter().map(|&s| sssp(&pg, s)).collect();
    let nearest: Vec<Option<(u64, VertexId)>> = (0..g.vertex_count())
        .map(|v| seeds.iter().zip(&per_seed).filter_map(|(&s, d)| d[v].map(|d| (d, s))).min())
        .collect();
    (0..g.vertex_count() as VertexId)
        .map(|v| {
            let (dist, src) = nearest[v as usize]?;
            if dist == 0 {
                return Some((0, v, v));
            }
            let pred = g
                .neighbors(v)
                .filter(|&(u, w)| dist.checked_sub(u64::from(w)).is_some_and(|du| nearest[u as usize] == Some((du, src))))
                .map(|(u, _)| u)
                .min()
                .expect("a shortest-path neighbour exists");
            Some((dist, src, pred))
        })
        .collect()
}

/// Weight of the MST of the complete seed graph under shortest-path distances.
pub fn apsp_mst_weight(g: &Graph, seeds: &[VertexId]) -> u64 {
    let pg = to_petgraph(g);
    let mut complete = UnGraph::<(), u64>::with_capacity(seeds.len(), seeds.len() * seeds.len() / 2);
    for _ in seeds {
        complete.add_node(());
    }
    for (i, &s) in seeds.iter().enumerate() {
        let d = sssp(&pg, s);
        for (j, &t) in seeds.iter().enumerate().skip(i + 1) {
            complete.add_edge(NodeIndex::new(i), NodeIndex::new(j), d[t as usize].expect("connected"));
        }
    }
    let mst = UnGraph::<(), u64>::from_elements(min_spanning_tree(&complete));
    mst.edge_weights().sum()
}

/// Optimal Steiner distance by enumerating every set of Steiner vertices and
/// taking the MST of the induced subgraph on seeds plus that set.
pub fn brute_force_steiner(g: &Graph, seeds: &[VertexId]) -> u64 {
    let n = g.vertex_count();
    assert!(n <= 16, "brute force is exponential in |V|");
    let others: Vec<VertexId> = (0..n as VertexId).filter(|v| !seeds.contains(v)).collect();
    let mut best = u64::MAX;
    for mask in 0u32..(1 << others.len()) {
        let mut keep = vec![false; n];
        for &s in seeds {
            keep[s as usize] = true;
        }
        for (i, &v) in others.iter().enumerate() {
            if mask & (1 << i) != 0 {
                keep[v as usize] = true;
            }
        }
        let mut sub = UnGraph::<(), u64>::with_capacity(n, g.edge_count());
        for _ in 0..n {
            sub.add_node(());
        }
        for (u, v, w) in g.edges().filter(|&(u, v, _)| keep[u as usize] && keep[v as usize]) {
            sub.add_edge(NodeIndex::new(u as usize), NodeIndex::new(v as usize), u64::from(w));
        }
        let forest = UnGraph::<(), u64>::from_elements(min_spanning_tree(&sub));
        let kept = keep.iter().filter(|&&k| k).count();
        // Spanning forest on kept vertices is a tree iff it has kept - 1 edges.
        if forest.edge_count() + 1 == kept {
            best = best.min(forest.edge_weights().sum());
        }
    }
    best
}

/// `d * k <= 2 (k - 1) * d_min`, the bound `2 (1 - 1/k)` without division.
pub fn within_bound(d: u64, d_min: u64, k: usize) -> bool {
    let k = k as u128;
    u128::from(d) * k <= 2 * (k - 1) * u128::from(d_min)
}
