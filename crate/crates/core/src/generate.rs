//! Seeded random graph generators for tests and benchmarks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{synthesize_weights, GraphError, VertexId, WeightedGraph};
use crate::weight::Weight;

/// Connected graph with `n` vertices and `min(m, n(n-1)/2)` edges: a random
/// spanning tree plus uniformly chosen extra edges. Weights uniform in
/// `[w_min, w_max]`.
pub fn random_connected<W: Weight>(
    n: usize,
    m: usize,
    w_min: u64,
    w_max: u64,
    rng_seed: u64,
) -> Result<WeightedGraph<W>, GraphError> {
    if n == 0 {
        return Err(GraphError::Domain("graph needs at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let max_edges = n * (n - 1) / 2;
    let target = m.clamp(n - 1, max_edges);
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.shuffle(&mut rng);
    let mut edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        edges.insert((a.min(b), a.max(b)));
    }
    while edges.len() < target {
        let a = rng.gen_range(0..n as VertexId);
        let b = rng.gen_range(0..n as VertexId);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let one = W::one();
    let topology = WeightedGraph::<W>::from_edges(n, edges.into_iter().map(|(a, b)| (a, b, one))).0;
    synthesize_weights(&topology, w_min, w_max, rng_seed ^ 0x9e37_79b9_7f4a_7c15)
}

/// Scale-free graph by preferential attachment: each new vertex links to `m`
/// distinct earlier vertices chosen proportionally to degree. Unit weights.
pub fn barabasi_albert<W: Weight>(n: usize, m: usize, rng_seed: u64) -> Result<WeightedGraph<W>, GraphError> {
    if m == 0 || n <= m {
        return Err(GraphError::Domain(format!("need 0 < m < n, got n={n} m={m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(n * m);
    // Every arc endpoint once per incident edge: sampling from it is degree-proportional.
    let mut endpoints: Vec<VertexId> = Vec::with_capacity(2 * n * m);
    for u in 0..=m as VertexId {
        for v in 0..u {
            edges.push((v, u));
            endpoints.extend([u, v]);
        }
    }
    let mut picked: Vec<VertexId> = Vec::with_capacity(m);
    for u in (m + 1) as VertexId..n as VertexId {
        picked.clear();
        while picked.len() < m {
            let v = endpoints[rng.gen_range(0..endpoints.len())];
            if !picked.contains(&v) {
                picked.push(v);
            }
        }
        for &v in &picked {
            edges.push((v, u));
            endpoints.extend([u, v]);
        }
    }
    let one = W::one();
    Ok(WeightedGraph::from_edges(n, edges.into_iter().map(|(a, b)| (a, b, one))).0)
}
