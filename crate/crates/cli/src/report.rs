//! Single-run JSON report.

use serde::{Deserialize, Serialize};
use steiner_core::engine::EngineMetrics;
use steiner_core::graph::GraphSummary;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub algorithm: String,
    pub graph_summary: GraphSummaryRecord,
    pub seed_count: usize,
    /// Empty for the sequential algorithms, which have no engine phases.
    pub phase_metrics: Vec<PhaseEntry>,
    pub wall_time_ms: f64,
    pub tree_summary: TreeSummary,
    /// `D / D_min`, present only when the exact oracle ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimal_distance: Option<u64>,
    pub config: ConfigEcho,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSummaryRecord {
    pub vertices: usize,
    /// Twice the number of undirected edges.
    pub arcs: usize,
    pub min_weight: Option<u64>,
    pub max_weight: Option<u64>,
}

impl From<&GraphSummary> for GraphSummaryRecord {
    fn from(s: &GraphSummary) -> Self {
        Self { vertices: s.vertices, arcs: s.arcs, min_weight: s.min_weight, max_weight: s.max_weight }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseEntry {
    pub phase: String,
    pub wall_time_ms: f64,
    pub messages_sent: u64,
    pub messages_processed: u64,
}

pub fn phase_entries(metrics: &EngineMetrics) -> Vec<PhaseEntry> {
    metrics
        .phases()
        .map(|(name, p)| PhaseEntry {
            phase: name.to_string(),
            wall_time_ms: p.wall_time.as_secs_f64() * 1e3,
            messages_sent: p.messages_sent,
            messages_processed: p.messages_processed,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeSummary {
    pub edges: usize,
    pub total_distance: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub partitions: usize,
    pub discipline: String,
    pub lanes: String,
    /// RNG seed recorded in the seed file header, if any.
    pub seed_rng_seed: Option<u64>,
    pub seed_strategy: Option<String>,
}
