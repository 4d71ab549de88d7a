//! Steiner tree result type, its text format and structural validation.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use crate::graph::{GraphError, VertexId, WeightedGraph};
use crate::weight::Weight;

/// Undirected tree edge, normalized so that `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeEdge<W: Weight = u32> {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: W,
}

impl<W: Weight> TreeEdge<W> {
    pub fn new(a: VertexId, b: VertexId, weight: W) -> Self {
        Self { u: a.min(b), v: a.max(b), weight }
    }
}

/// Edge set of a Steiner tree and its total distance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SteinerTree<W: Weight = u32> {
    edges: BTreeSet<TreeEdge<W>>,
    total_distance: u64,
}

impl<W: Weight> SteinerTree<W> {
    pub fn empty() -> Self {
        Self { edges: BTreeSet::new(), total_distance: 0 }
    }

    /// Collects edges, merging duplicates.
    pub fn from_edges(edges: impl IntoIterator<Item = TreeEdge<W>>) -> Self {
        let edges: BTreeSet<TreeEdge<W>> = edges.into_iter().collect();
        let total_distance = edges.iter().map(|e| e.weight.widen()).sum();
        Self { edges, total_distance }
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &TreeEdge<W>> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_distance(&self) -> u64 {
        self.total_distance
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.edges.iter().flat_map(|e| [e.u, e.v]).collect()
    }

    /// Writes `u v w` lines after a header recording `|S|` and the total.
    pub fn write_to(&self, seed_count: usize, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "# seeds {seed_count}")?;
        writeln!(out, "# total_distance {}", self.total_distance)?;
        writeln!(out, "# edges {}", self.edges.len())?;
        for e in &self.edges {
            writeln!(out, "{} {} {}", e.u, e.v, e.weight)?;
        }
        Ok(())
    }

    pub fn to_text(&self, seed_count: usize) -> String {
        let mut buf = Vec::new();
        self.write_to(seed_count, &mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("tree text is ASCII")
    }

    /// Parses the format produced by [`SteinerTree::write_to`].
    pub fn read_from(reader: impl BufRead) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = || GraphError::Parse { line: idx + 1, message: format!("malformed tree edge `{line}`") };
            let mut tokens = line.split_whitespace();
            let mut next = || tokens.next().ok_or_else(parse_err);
            let u: VertexId = next()?.parse().map_err(|_| parse_err())?;
            let v: VertexId = next()?.parse().map_err(|_| parse_err())?;
            let w: W = next()?.parse().map_err(|_| parse_err())?;
            edges.push(TreeEdge::new(u, v, w));
        }
        Ok(Self::from_edges(edges))
    }
}

/// Names of the structural checks run by [`validate_tree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TreeCheck {
    EdgesInGraph,
    Acyclic,
    Connected,
    SpansSeeds,
    LeavesAreSeeds,
    DistanceSum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: TreeCheck,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn passed(&self, check: TreeCheck) -> bool {
        self.outcomes.iter().any(|o| o.check == check && o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for o in &self.outcomes {
            let mark = if o.passed { "ok" } else { "FAIL" };
            writeln!(f, "{mark:4} {:?}: {}", o.check, o.detail)?;
        }
        Ok(())
    }
}

fn find(parent: &mut BTreeMap<VertexId, VertexId>, x: VertexId) -> VertexId {
    let mut root = x;
    while parent[&root] != root {
        root = parent[&root];
    }
    let mut cur = x;
    while parent[&cur] != root {
        let next = parent[&cur];
        parent.insert(cur, root);
        cur = next;
    }
    root
}

/// Checks that `tree` is a Steiner tree for `seeds` in `graph`.
pub fn validate_tree<W: Weight>(tree: &SteinerTree<W>, seeds: &[VertexId], graph: &WeightedGraph<W>) -> ValidationReport {
    let mut outcomes = Vec::new();
    let mut push = |check, passed, detail: String| outcomes.push(CheckOutcome { check, passed, detail });

    let n = graph.vertex_count() as VertexId;
    let bad_edges: Vec<_> = tree
        .edges()
        .filter(|e| e.u >= n || e.v >= n || graph.weight(e.u, e.v) != Some(e.weight))
        .collect();
    push(
        TreeCheck::EdgesInGraph,
        bad_edges.is_empty(),
        match bad_edges.first() {
            None => format!("{} edges match the graph", tree.edge_count()),
            Some(e) => format!("{} edges missing or mis-weighted, e.g. ({}, {}, {})", bad_edges.len(), e.u, e.v, e.weight),
        },
    );

    let vertices = tree.vertices();
    let mut parent: BTreeMap<VertexId, VertexId> = vertices.iter().map(|&v| (v, v)).collect();
    let mut cycle_edge = None;
    for e in tree.edges() {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a == b {
            cycle_edge.get_or_insert((e.u, e.v));
        } else {
            parent.insert(a, b);
        }
    }
    push(
        TreeCheck::Acyclic,
        cycle_edge.is_none(),
        match cycle_edge {
            None => "no cycles".into(),
            Some((u, v)) => format!("edge ({u}, {v}) closes a cycle"),
        },
    );

    let roots: BTreeSet<VertexId> = vertices.iter().map(|&v| find(&mut parent, v)).collect();
    push(TreeCheck::Connected, roots.len() <= 1, format!("{} component(s)", roots.len()));

    let distinct_seeds: BTreeSet<VertexId> = seeds.iter().copied().collect();
    let missing: Vec<VertexId> = if tree.edge_count() == 0 && distinct_seeds.len() <= 1 {
        Vec::new()
    } else {
        distinct_seeds.iter().copied().filter(|s| !vertices.contains(s)).collect()
    };
    push(
        TreeCheck::SpansSeeds,
        missing.is_empty(),
        if missing.is_empty() { "all seeds covered".into() } else { format!("seeds not in tree: {missing:?}") },
    );

    let mut degree: BTreeMap<VertexId, usize> = BTreeMap::new();
    for e in tree.edges() {
        *degree.entry(e.u).or_default() += 1;
        *degree.entry(e.v).or_default() += 1;
    }
    let steiner_leaves: Vec<VertexId> =
        degree.iter().filter(|&(v, &d)| d == 1 && !distinct_seeds.contains(v)).map(|(&v, _)| v).collect();
    push(
        TreeCheck::LeavesAreSeeds,
        steiner_leaves.is_empty(),
        if steiner_leaves.is_empty() { "every leaf is a seed".into() } else { format!("non-seed leaves: {steiner_leaves:?}") },
    );

    let sum: u64 = tree.edges().map(|e| e.weight.widen()).sum();
    push(
        TreeCheck::DistanceSum,
        sum == tree.total_distance(),
        format!("edge sum {sum}, recorded {}", tree.total_distance()),
    );

    ValidationReport { outcomes }
}
