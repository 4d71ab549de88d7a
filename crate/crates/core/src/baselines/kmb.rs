use std::collections::BTreeSet;

use crate::baselines::apsp::apsp_seeds;
use crate::error::SteinerError;
use crate::graph::{VertexId, WeightedGraph};
use crate::tree::SteinerTree;
use crate::weight::Weight;

use super::finish_tree;

/// Classic KMB: seed APSP, MST of the complete seed graph, shortest-path
/// expansion, MST of the expansion, non-seed leaf removal.
pub fn kmb_steiner<W: Weight>(graph: &WeightedGraph<W>, seeds: &[VertexId]) -> Result<SteinerTree<W>, SteinerError> {
    let apsp = apsp_seeds(graph, seeds)?;
    let k = apsp.len();
    let seeds = &apsp.seeds;

    // Dense Prim on the complete distance graph, ties by (distance, s, t).
    let mut in_tree = vec![false; k];
    let mut best: Vec<Option<(u64, VertexId, VertexId, usize)>> = vec![None; k];
    let mut mst = Vec::with_capacity(k.saturating_sub(1));
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..k {
        for j in 0..k {
            if in_tree[j] {
                continue;
            }
            let (a, b) = (seeds[current].min(seeds[j]), seeds[current].max(seeds[j]));
            let cand = (apsp.distance(current, j), a, b, current);
            if best[j].is_none_or(|b| (cand.0, cand.1, cand.2) < (b.0, b.1, b.2)) {
                best[j] = Some(cand);
            }
        }
        let next = (0..k)
            .filter(|&j| !in_tree[j])
            .min_by_key(|&j| {
                let b = best[j].expect("complete graph");
                (b.0, b.1, b.2)
            })
            .expect("a vertex remains");
        let from = best[next].unwrap().3;
        mst.push((from, next));
        in_tree[next] = true;
        current = next;
    }

    let mut expanded = BTreeSet::new();
    for (i, j) in mst {
        expanded.extend(apsp.path_edges(graph, i, seeds[j]));
    }
    Ok(finish_tree(&expanded, seeds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::validate_tree;

    #[test]
    fn star_forces_the_center() {
        let g = WeightedGraph::<u32>::from_edges(4, [(3, 0, 1), (3, 1, 1), (3, 2, 1)]).0;
        let t = kmb_steiner(&g, &[0, 1, 2]).unwrap();
        assert_eq!(t.total_distance(), 3);
        assert!(validate_tree(&t, &[0, 1, 2], &g).all_passed());
    }

    #[test]
    fn path_graph() {
        let g = WeightedGraph::<u32>::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).0;
        let t = kmb_steiner(&g, &[0, 3]).unwrap();
        assert_eq!(t.total_distance(), 3);
        assert_eq!(t.edge_count(), 3);
    }

    #[test]
    fn overlapping_paths_are_merged() {
        // Seeds 1, 2, 3 all reach each other through hub 0; MST paths share edges.
        let g = WeightedGraph::<u32>::from_edges(5, [(0, 1, 2), (0, 2, 2), (0, 3, 2), (1, 4, 9)]).0;
        let t = kmb_steiner(&g, &[1, 2, 3]).unwrap();
        assert_eq!(t.total_distance(), 6);
        assert!(validate_tree(&t, &[1, 2, 3], &g).all_passed());
    }

    #[test]
    fn single_seed() {
        let g = WeightedGraph::<u32>::from_edges(2, [(0, 1, 1)]).0;
        assert_eq!(kmb_steiner(&g, &[1]).unwrap().edge_count(), 0);
    }
}
