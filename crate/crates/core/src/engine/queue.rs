use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use super::Visitor;

/// Order in which a partition drains its visitor queue.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueueDiscipline {
    /// Arrival order.
    Fifo,
    /// Smallest `priority` first; equal keys leave in arrival order.
    #[default]
    MinPriority,
}

impl QueueDiscipline {
    pub fn name(self) -> &'static str {
        match self {
            QueueDiscipline::Fifo => "fifo",
            QueueDiscipline::MinPriority => "priority",
        }
    }
}

impl std::str::FromStr for QueueDiscipline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fifo" => Ok(QueueDiscipline::Fifo),
            "priority" | "min_priority" => Ok(QueueDiscipline::MinPriority),
            other => Err(format!("unknown queue discipline `{other}` (expected fifo or priority)")),
        }
    }
}

pub(super) struct Ranked<P> {
    key: u64,
    seq: u64,
    visitor: Visitor<P>,
}

impl<P> PartialEq for Ranked<P> {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.seq == other.seq
    }
}

impl<P> Eq for Ranked<P> {}

impl<P> PartialOrd for Ranked<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<P> Ord for Ranked<P> {
    // Reversed so the max-heap yields the smallest (key, seq).
    fn cmp(&self, other: &Self) -> Ordering {
        (other.key, other.seq).cmp(&(self.key, self.seq))
    }
}

pub(crate) enum VisitorQueue<P> {
    Fifo(VecDeque<Visitor<P>>),
    Priority { heap: BinaryHeap<Ranked<P>>, seq: u64 },
}

impl<P> VisitorQueue<P> {
    pub(crate) fn new(discipline: QueueDiscipline) -> Self {
        match discipline {
            QueueDiscipline::Fifo => VisitorQueue::Fifo(VecDeque::new()),
            QueueDiscipline::MinPriority => VisitorQueue::Priority { heap: BinaryHeap::new(), seq: 0 },
        }
    }

    pub(crate) fn push(&mut self, visitor: Visitor<P>) {
        match self {
            VisitorQueue::Fifo(q) => q.push_back(visitor),
            VisitorQueue::Priority { heap, seq } => {
                heap.push(Ranked { key: visitor.priority, seq: *seq, visitor });
                *seq += 1;
            }
        }
    }

    pub(crate) fn pop(&mut self) -> Option<Visitor<P>> {
        match self {
            VisitorQueue::Fifo(q) => q.pop_front(),
            VisitorQueue::Priority { heap, .. } => heap.pop().map(|r| r.visitor),
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        match self {
            VisitorQueue::Fifo(q) => q.is_empty(),
            VisitorQueue::Priority { heap, .. } => heap.is_empty(),
        }
    }
}
