//! Partitioned, asynchronous, vertex-centric execution.
//!
//! Algorithms are written as a [`VertexProgram`]: a `visit` callback that
//! receives one [`Visitor`] message, mutates the target vertex's state and may
//! emit further visitors through an [`Outbox`]. Vertex state is split across
//! partitions by [`PartitionMap`] ownership; each partition drains its own
//! queue under a [`QueueDiscipline`]. A run ends at quiescence, when no
//! message is queued or being processed anywhere.
//!
//! Two schedulers exist. [`Lanes::Single`] interleaves partitions
//! round-robin on the calling thread and is fully deterministic.
//! [`Lanes::PerPartition`] gives every partition its own thread; remote sends
//! go through channels and quiescence is detected with a global outstanding
//! message counter (incremented on send, decremented once a visit and all of
//! its sends are done).

mod metrics;
mod queue;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crossbeam_channel::{unbounded, Receiver, Sender};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use metrics::{EngineMetrics, PhaseRecord, PhaseStats};
pub use queue::QueueDiscipline;
use queue::VisitorQueue;

use crate::graph::{PartitionMap, VertexId};

/// A message addressed to one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Visitor<P> {
    pub target: VertexId,
    pub sender: VertexId,
    pub payload: P,
    /// Ordering key for [`QueueDiscipline::MinPriority`].
    pub priority: u64,
}

/// Collects the visitors emitted by one `visit` call.
#[derive(Debug)]
pub struct Outbox<P> {
    pending: Vec<Visitor<P>>,
}

impl<P> Outbox<P> {
    fn new() -> Self {
        Self { pending: Vec::new() }
    }

    #[inline]
    pub fn send(&mut self, visitor: Visitor<P>) {
        self.pending.push(visitor);
    }
}

/// Vertex-centric algorithm executed by the engine.
pub trait VertexProgram: Sync {
    type State: Send;
    type Payload: Send;

    fn visit(&self, visitor: Visitor<Self::Payload>, state: &mut Self::State, out: &mut Outbox<Self::Payload>);
}

/// Per-vertex state split by partition ownership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedState<S> {
    map: PartitionMap,
    parts: Vec<Vec<S>>,
}

impl<S> PartitionedState<S> {
    pub fn from_fn(map: PartitionMap, mut init: impl FnMut(VertexId) -> S) -> Self {
        let parts = (0..map.partition_count())
            .map(|p| map.owned(p).map(&mut init).collect())
            .collect();
        Self { map, parts }
    }

    pub fn map(&self) -> &PartitionMap {
        &self.map
    }

    pub fn get(&self, v: VertexId) -> &S {
        &self.parts[self.map.owner(v)][self.map.local_index(v)]
    }

    pub fn get_mut(&mut self, v: VertexId) -> &mut S {
        &mut self.parts[self.map.owner(v)][self.map.local_index(v)]
    }

    /// Gathers state into a vector indexed by vertex id.
    pub fn into_global(self) -> Vec<S> {
        let n = self.map.vertex_count();
        let p_count = self.map.partition_count();
        let mut iters: Vec<_> = self.parts.into_iter().map(Vec::into_iter).collect();
        (0..n).map(|v| iters[v % p_count].next().expect("partition sizes match")).collect()
    }
}

/// Scheduler used to drive partitions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lanes {
    /// Deterministic round-robin over partitions on the calling thread.
    Single,
    /// One worker thread per partition.
    #[default]
    PerPartition,
}

/// Upper bound on messages sent during one phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageBudget {
    Unlimited,
    /// Multiple of the graph's arc count (plus the initial visitors).
    PerArc(u64),
    Fixed(u64),
}

impl Default for MessageBudget {
    fn default() -> Self {
        MessageBudget::PerArc(64)
    }
}

impl MessageBudget {
    fn resolve(self, arc_count: usize, initial: usize) -> Option<u64> {
        match self {
            MessageBudget::Unlimited => None,
            MessageBudget::PerArc(k) => Some(k.saturating_mul(arc_count.max(1) as u64) + initial as u64),
            MessageBudget::Fixed(n) => Some(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub partition_count: usize,
    pub discipline: QueueDiscipline,
    pub lanes: Lanes,
    pub budget: MessageBudget,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            partition_count: 1,
            discipline: QueueDiscipline::MinPriority,
            lanes: Lanes::Single,
            budget: MessageBudget::default(),
        }
    }
}

impl EngineConfig {
    pub fn new(partition_count: usize, discipline: QueueDiscipline, lanes: Lanes) -> Self {
        Self { partition_count, discipline, lanes, budget: MessageBudget::default() }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("visitor from {sender} targets vertex {target}, but the graph has {vertex_count} vertices")]
    TargetOutOfRange { sender: VertexId, target: VertexId, vertex_count: usize },
    #[error("phase `{phase}` exceeded its message budget of {budget} ({processed} processed)")]
    BudgetExceeded { phase: String, budget: u64, processed: u64 },
}

#[derive(Default)]
struct LaneCounts {
    sent: u64,
    remote: u64,
    processed: u64,
}

/// Runs `program` from `initial` until quiescence, recording under `phase`.
///
/// Initial visitors count as sent messages, so a successful run always ends
/// with `messages_sent == messages_processed` for the phase.
pub fn run_to_quiescence<Pr: VertexProgram>(
    program: &Pr,
    states: &mut PartitionedState<Pr::State>,
    config: &EngineConfig,
    arc_count: usize,
    initial: Vec<Visitor<Pr::Payload>>,
    phase: &str,
    metrics: &mut EngineMetrics,
) -> Result<(), EngineError> {
    let map = *states.map();
    assert_eq!(map.partition_count(), config.partition_count, "state partitioning differs from config");
    for v in &initial {
        check_target(v, map.vertex_count())?;
    }
    let budget = config.budget.resolve(arc_count, initial.len());
    let started = Instant::now();
    let initial_count = initial.len() as u64;
    let result = match config.lanes {
        Lanes::Single => run_single(program, states, config.discipline, budget, initial, phase),
        Lanes::PerPartition => run_lanes(program, states, config.discipline, budget, initial, phase),
    };
    let elapsed = started.elapsed();
    let (counts, outcome) = match result {
        Ok(c) => (c, Ok(())),
        Err((c, e)) => (c, Err(e)),
    };
    let stats = metrics.phase_mut(phase);
    stats.messages_sent += initial_count + counts.sent;
    stats.remote_messages += counts.remote;
    stats.messages_processed += counts.processed;
    stats.wall_time += elapsed;
    metrics.dequeue_count += counts.processed;
    outcome
}

#[inline]
fn check_target<P>(v: &Visitor<P>, vertex_count: usize) -> Result<(), EngineError> {
    if (v.target as usize) < vertex_count {
        Ok(())
    } else {
        Err(EngineError::TargetOutOfRange { sender: v.sender, target: v.target, vertex_count })
    }
}

type LaneResult = Result<LaneCounts, (LaneCounts, EngineError)>;

fn run_single<Pr: VertexProgram>(
    program: &Pr,
    states: &mut PartitionedState<Pr::State>,
    discipline: QueueDiscipline,
    budget: Option<u64>,
    initial: Vec<Visitor<Pr::Payload>>,
    phase: &str,
) -> LaneResult {
    let map = *states.map();
    let n = map.vertex_count();
    let mut total_sent = initial.len() as u64;
    let mut queues: Vec<VisitorQueue<Pr::Payload>> =
        (0..map.partition_count()).map(|_| VisitorQueue::new(discipline)).collect();
    for v in initial {
        queues[map.owner(v.target)].push(v);
    }
    let mut counts = LaneCounts::default();
    let mut out = Outbox::new();
    loop {
        let mut progressed = false;
        for p in 0..queues.len() {
            let Some(visitor) = queues[p].pop() else { continue };
            progressed = true;
            counts.processed += 1;
            let slot = map.local_index(visitor.target);
            program.visit(visitor, &mut states.parts[p][slot], &mut out);
            for msg in out.pending.drain(..) {
                if let Err(e) = check_target(&msg, n) {
                    return Err((counts, e));
                }
                total_sent += 1;
                if budget.is_some_and(|b| total_sent > b) {
                    let e = EngineError::BudgetExceeded {
                        phase: phase.to_string(),
                        budget: budget.unwrap(),
                        processed: counts.processed,
                    };
                    return Err((counts, e));
                }
                counts.sent += 1;
                let owner = map.owner(msg.target);
                if owner != p {
                    counts.remote += 1;
                }
                queues[owner].push(msg);
            }
        }
        if !progressed {
            debug_assert!(queues.iter().all(VisitorQueue::is_empty));
            return Ok(counts);
        }
    }
}

struct Shared<'a> {
    outstanding: AtomicU64,
    total_sent: AtomicU64,
    abort: AtomicBool,
    failure: Mutex<Option<EngineError>>,
    budget: Option<u64>,
    phase: &'a str,
}

impl Shared<'_> {
    fn fail(&self, error: EngineError) {
        let mut slot = self.failure.lock().unwrap();
        slot.get_or_insert(error);
        self.abort.store(true, Ordering::SeqCst);
    }
}

fn run_lanes<Pr: VertexProgram>(
    program: &Pr,
    states: &mut PartitionedState<Pr::State>,
    discipline: QueueDiscipline,
    budget: Option<u64>,
    initial: Vec<Visitor<Pr::Payload>>,
    phase: &str,
) -> LaneResult {
    let map = *states.map();
    let p_count = map.partition_count();
    type Lane<P> = (Sender<Visitor<P>>, Receiver<Visitor<P>>);
    let (senders, receivers): (Vec<_>, Vec<_>) =
        (0..p_count).map(|_| -> Lane<Pr::Payload> { unbounded() }).unzip();
    let shared = Shared {
        outstanding: AtomicU64::new(initial.len() as u64),
        total_sent: AtomicU64::new(initial.len() as u64),
        abort: AtomicBool::new(false),
        failure: Mutex::new(None),
        budget,
        phase,
    };
    let mut seeded: Vec<Vec<Visitor<Pr::Payload>>> = (0..p_count).map(|_| Vec::new()).collect();
    for v in initial {
        seeded[map.owner(v.target)].push(v);
    }

    let counts = std::thread::scope(|scope| {
        let handles: Vec<_> = states
            .parts
            .iter_mut()
            .zip(receivers)
            .zip(seeded)
            .enumerate()
            .map(|(p, ((local, inbox), start))| {
                let senders = &senders;
                let shared = &shared;
                scope.spawn(move || lane_worker(program, p, map, discipline, local, inbox, senders, start, shared))
            })
            .collect();
        let mut total = LaneCounts::default();
        for h in handles {
            let c = h.join().expect("engine worker panicked");
            total.sent += c.sent;
            total.remote += c.remote;
            total.processed += c.processed;
        }
        total
    });

    match shared.failure.into_inner().unwrap() {
        None => Ok(counts),
        Some(e) => Err((counts, e)),
    }
}

#[allow(clippy::too_many_arguments)]
fn lane_worker<Pr: VertexProgram>(
    program: &Pr,
    partition: usize,
    map: PartitionMap,
    discipline: QueueDiscipline,
    local: &mut [Pr::State],
    inbox: Receiver<Visitor<Pr::Payload>>,
    senders: &[Sender<Visitor<Pr::Payload>>],
    start: Vec<Visitor<Pr::Payload>>,
    shared: &Shared<'_>,
) -> LaneCounts {
    let n = map.vertex_count();
    let mut queue = VisitorQueue::new(discipline);
    for v in start {
        queue.push(v);
    }
    let mut counts = LaneCounts::default();
    let mut out = Outbox::new();
    while !shared.abort.load(Ordering::Relaxed) {
        while let Ok(v) = inbox.try_recv() {
            queue.push(v);
        }
        let Some(visitor) = queue.pop() else {
            if shared.outstanding.load(Ordering::SeqCst) == 0 {
                break;
            }
            if let Ok(v) = inbox.recv_timeout(Duration::from_micros(50)) {
                queue.push(v);
            }
            continue;
        };
        counts.processed += 1;
        let slot = map.local_index(visitor.target);
        program.visit(visitor, &mut local[slot], &mut out);
        for msg in out.pending.drain(..) {
            if let Err(e) = check_target(&msg, n) {
                shared.fail(e);
                break;
            }
            let sent = shared.total_sent.fetch_add(1, Ordering::Relaxed) + 1;
            if let Some(budget) = shared.budget.filter(|&b| sent > b) {
                shared.fail(EngineError::BudgetExceeded {
                    phase: shared.phase.to_string(),
                    budget,
                    processed: counts.processed,
                });
                break;
            }
            shared.outstanding.fetch_add(1, Ordering::SeqCst);
            counts.sent += 1;
            let owner = map.owner(msg.target);
            if owner == partition {
                queue.push(msg);
            } else {
                counts.remote += 1;
                senders[owner].send(msg).expect("receiver lives for the whole run");
            }
        }
        out.pending.clear();
        shared.outstanding.fetch_sub(1, Ordering::SeqCst);
    }
    counts
}

/// One self-addressed initial visitor per vertex satisfying `predicate`.
pub fn broadcast_init<P>(
    vertex_count: usize,
    predicate: impl Fn(VertexId) -> bool,
    payload: impl Fn(VertexId) -> (P, u64),
) -> Vec<Visitor<P>> {
    (0..vertex_count as VertexId)
        .filter(|&v| predicate(v))
        .map(|v| {
            let (payload, priority) = payload(v);
            Visitor { target: v, sender: v, payload, priority }
        })
        .collect()
}

/// Key-wise minimum over per-partition tables under `V`'s total order.
///
/// The single returned table stands for the identical copy every partition
/// would hold after the collective.
pub fn all_reduce_min<K: Ord + Clone, V: Ord + Clone>(tables: &[BTreeMap<K, V>]) -> BTreeMap<K, V> {
    let mut out: BTreeMap<K, V> = BTreeMap::new();
    for table in tables {
        for (k, v) in table {
            match out.get_mut(k) {
                Some(current) if *v < *current => *current = v.clone(),
                Some(_) => {}
                None => {
                    out.insert(k.clone(), v.clone());
                }
            }
        }
    }
    out
}

/// Runs `work` once per partition, on its own thread under
/// [`Lanes::PerPartition`], and returns the results in partition order.
pub fn for_each_partition<T: Send>(map: &PartitionMap, lanes: Lanes, work: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let p_count = map.partition_count();
    match lanes {
        Lanes::Single => (0..p_count).map(work).collect(),
        Lanes::PerPartition => std::thread::scope(|scope| {
            let work = &work;
            let handles: Vec<_> = (0..p_count).map(|p| scope.spawn(move || work(p))).collect();
            handles.into_iter().map(|h| h.join().expect("partition worker panicked")).collect()
        }),
    }
}
