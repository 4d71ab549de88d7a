//! Sequential reference algorithms: KMB, Mehlhorn, seed APSP and an exact
//! Dreyfus-Wagner oracle.

mod apsp;
mod exact;
mod kmb;
mod mehlhorn;

use std::collections::{BTreeMap, BTreeSet};

pub use apsp::{apsp_seeds, SeedDistanceGraph};
pub use exact::{exact_steiner, ExactLimits};
pub use kmb::kmb_steiner;
pub use mehlhorn::mehlhorn_steiner;

use crate::graph::VertexId;
use crate::tree::{SteinerTree, TreeEdge};
use crate::weight::Weight;

/// Minimum spanning forest by Kruskal under the `(weight, u, v)` order.
fn kruskal<W: Weight>(edges: &BTreeSet<TreeEdge<W>>) -> Vec<TreeEdge<W>> {
    let mut sorted: Vec<TreeEdge<W>> = edges.iter().copied().collect();
    sorted.sort_unstable_by_key(|e| (e.weight, e.u, e.v));
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<VertexId, VertexId>, x: VertexId) -> VertexId {
        let p = *parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let root = find(parent, p);
        parent.insert(x, root);
        root
    }
    let mut out = Vec::new();
    for e in sorted {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent.insert(a, b);
            out.push(e);
        }
    }
    out
}

/// Repeatedly removes leaves that are not seeds.
fn prune_steiner_leaves<W: Weight>(edges: Vec<TreeEdge<W>>, seeds: &[VertexId]) -> SteinerTree<W> {
    let seeds: BTreeSet<VertexId> = seeds.iter().copied().collect();
    let mut alive: BTreeSet<TreeEdge<W>> = edges.into_iter().collect();
    let mut incident: BTreeMap<VertexId, BTreeSet<TreeEdge<W>>> = BTreeMap::new();
    for e in &alive {
        incident.entry(e.u).or_default().insert(*e);
        incident.entry(e.v).or_default().insert(*e);
    }
    let mut stack: Vec<VertexId> =
        incident.iter().filter(|(v, es)| es.len() == 1 && !seeds.contains(v)).map(|(&v, _)| v).collect();
    while let Some(leaf) = stack.pop() {
        let Some(es) = incident.get(&leaf) else { continue };
        if es.len() != 1 || seeds.contains(&leaf) {
            continue;
        }
        let e = *es.iter().next().unwrap();
        alive.remove(&e);
        let other = if e.u == leaf { e.v } else { e.u };
        incident.remove(&leaf);
        if let Some(os) = incident.get_mut(&other) {
            os.remove(&e);
            if os.len() == 1 && !seeds.contains(&other) {
                stack.push(other);
            }
        }
    }
    SteinerTree::from_edges(alive)
}

/// KMB steps 4 and 5: MST of the expanded subgraph, then leaf pruning.
fn finish_tree<W: Weight>(expanded: &BTreeSet<TreeEdge<W>>, seeds: &[VertexId]) -> SteinerTree<W> {
    prune_steiner_leaves(kruskal(expanded), seeds)
}
