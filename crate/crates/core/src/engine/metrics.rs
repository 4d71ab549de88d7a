use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Counters for one labelled phase.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseStats {
    pub messages_sent: u64,
    /// Sends whose target lives on a different partition than the sender.
    pub remote_messages: u64,
    pub messages_processed: u64,
    pub wall_time: Duration,
}

/// Flat serialized form of [`PhaseStats`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub messages_sent: u64,
    pub messages_processed: u64,
    pub wall_time_ms: f64,
}

/// Per-phase message and timing accounting.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineMetrics {
    phases: BTreeMap<String, PhaseStats>,
    order: Vec<String>,
    pub dequeue_count: u64,
}

impl EngineMetrics {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn phase_mut(&mut self, label: &str) -> &mut PhaseStats {
        if !self.phases.contains_key(label) {
            self.order.push(label.to_string());
        }
        self.phases.entry(label.to_string()).or_default()
    }

    pub fn phase(&self, label: &str) -> Option<&PhaseStats> {
        self.phases.get(label)
    }

    /// Phases in first-recorded order.
    pub fn phases(&self) -> impl Iterator<Item = (&str, &PhaseStats)> {
        self.order.iter().map(|label| (label.as_str(), &self.phases[label]))
    }

    pub fn add_time(&mut self, label: &str, elapsed: Duration) {
        self.phase_mut(label).wall_time += elapsed;
    }

    pub fn total_sent(&self) -> u64 {
        self.phases.values().map(|p| p.messages_sent).sum()
    }

    pub fn total_processed(&self) -> u64 {
        self.phases.values().map(|p| p.messages_processed).sum()
    }

    pub fn total_time(&self) -> Duration {
        self.phases.values().map(|p| p.wall_time).sum()
    }

    pub fn to_records(&self) -> BTreeMap<String, PhaseRecord> {
        self.phases
            .iter()
            .map(|(label, p)| {
                let record = PhaseRecord {
                    messages_sent: p.messages_sent,
                    messages_processed: p.messages_processed,
                    wall_time_ms: p.wall_time.as_secs_f64() * 1e3,
                };
                (label.clone(), record)
            })
            .collect()
    }
}
