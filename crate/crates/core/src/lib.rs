//! Steiner tree 2-approximation over Voronoi cells of the seed set, run on a
//! partitioned message-driven engine.
//!
//! ```
//! use steiner_core::{solve_steiner, validate_tree, EngineConfig, Graph};
//!
//! let (g, _) = Graph::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
//! let sol = solve_steiner(&g, &[0, 3], &EngineConfig::default()).unwrap();
//! assert_eq!(sol.tree.total_distance(), 3);
//! assert!(validate_tree(&sol.tree, &[0, 3], &g).all_passed());
//! ```

pub mod baselines;
pub mod engine;
pub mod error;
pub mod generate;
pub mod graph;
pub mod pipeline;
pub mod seedsel;
pub mod tree;
pub mod weight;

pub use baselines::{apsp_seeds, exact_steiner, kmb_steiner, mehlhorn_steiner, ExactLimits, SeedDistanceGraph};
pub use engine::{EngineConfig, EngineMetrics, Lanes, MessageBudget, QueueDiscipline};
pub use error::SteinerError;
pub use graph::{GraphError, PartitionMap, VertexId, WeightedGraph};
pub use pipeline::{compute_voronoi_cells, phase, solve_steiner, SteinerSolution, VertexState};
pub use seedsel::{select_seeds, SeedSpec, SeedStrategy};
pub use tree::{validate_tree, SteinerTree, TreeEdge, ValidationReport};
pub use weight::Weight;

/// 32-bit weights: the default storage.
pub type Graph = WeightedGraph<u32>;
/// 16-bit weights for large graphs with small weight ranges.
pub type CompactGraph = WeightedGraph<u16>;
pub type WideGraph = WeightedGraph<u64>;
pub type Tree = SteinerTree<u32>;
pub type Solution = SteinerSolution<u32>;
