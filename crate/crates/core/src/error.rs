use thiserror::Error;

use crate::engine::EngineError;
use crate::graph::{GraphError, VertexId};

#[derive(Debug, Error)]
pub enum SteinerError {
    #[error("seed set is empty")]
    EmptySeeds,
    #[error("seed {seed} is not a vertex (graph has {vertex_count})")]
    SeedOutOfRange { seed: VertexId, vertex_count: usize },
    #[error("seed {0} listed more than once")]
    DuplicateSeed(VertexId),
    #[error("seeds are not connected; unreached: {unreached:?}")]
    SeedsDisconnected { unreached: Vec<VertexId> },
    #[error("exact oracle refused: {0}")]
    OracleRefused(String),
    #[error("corrupted vertex state at {vertex}: {reason}")]
    CorruptedState { vertex: VertexId, reason: String },
    #[error("internal consistency violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Checks range and distinctness; returns the seeds sorted ascending.
pub fn normalize_seeds(seeds: &[VertexId], vertex_count: usize) -> Result<Vec<VertexId>, SteinerError> {
    if seeds.is_empty() {
        return Err(SteinerError::EmptySeeds);
    }
    let mut sorted = seeds.to_vec();
    sorted.sort_unstable();
    if let Some(&seed) = sorted.iter().find(|&&s| s as usize >= vertex_count) {
        return Err(SteinerError::SeedOutOfRange { seed, vertex_count });
    }
    if let Some(pair) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(SteinerError::DuplicateSeed(pair[0]));
    }
    Ok(sorted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_normalization() {
        assert_eq!(normalize_seeds(&[4, 1, 3], 5).unwrap(), vec![1, 3, 4]);
        assert!(matches!(normalize_seeds(&[], 5), Err(SteinerError::EmptySeeds)));
        assert!(matches!(normalize_seeds(&[5], 5), Err(SteinerError::SeedOutOfRange { seed: 5, .. })));
        assert!(matches!(normalize_seeds(&[2, 1, 2], 5), Err(SteinerError::DuplicateSeed(2))));
    }
}
