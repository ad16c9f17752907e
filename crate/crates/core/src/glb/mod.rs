//! Lifeline-based global load balancing for branch and prune.
//!
//! Every worker owns a [`TaskQueue`](crate::search::TaskQueue). Worker 0
//! starts with the root box; the others start empty and obtain work by
//! stealing: first up to `w` random steal attempts, then by requesting work
//! along their outgoing lifelines, which victims fulfil as soon as they have
//! work to spare. Termination is detected with a credit scheme rooted at
//! worker 0.
//!
//! Two backends run the same worker state machine: OS threads with message
//! channels, and a single-threaded deterministic simulation.

use std::time::Duration;

use thiserror::Error;

use crate::expr::Problem;
use crate::search::{Paving, SearchStats};

mod credit;
mod lifeline;
mod message;
mod sim;
mod threads;
mod worker;

pub use credit::Credit;
pub use lifeline::{min_dims, LifelineGraph};
pub use message::Message;
pub use sim::SimCounters;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlbError {
    #[error("at least one worker is required")]
    NoWorkers,
    #[error("lifeline side must be at least 2, got {0}")]
    LifelineSide(usize),
    #[error("lifeline dimension must be at least 1, got {0}")]
    LifelineDims(u32),
    #[error("lifeline graph too small: {side}^{dims} < {workers} workers")]
    LifelineCapacity { side: usize, dims: u32, workers: usize },
    #[error("slice duration must be positive")]
    ZeroSlice,
    #[error("unknown preset configuration {0} (expected 1..=7)")]
    UnknownPreset(u8),
    #[error("worker {worker} panicked: {message}")]
    WorkerPanicked { worker: usize, message: String },
    #[error("simulation stalled after {rounds} rounds with no progress and no messages in flight")]
    SimulationStalled { rounds: u64 },
}

/// Scheduler parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlbConfig {
    /// Minimum processing time between load-balancing opportunities.
    pub slice: Duration,
    /// Random steal attempts before falling back to lifelines.
    pub random_steals: u32,
    pub lifeline_side: usize,
    pub lifeline_dims: u32,
    pub workers: usize,
    pub seed: u64,
}

impl GlbConfig {
    /// One-millisecond slices, binary lifelines of minimal dimension, no
    /// random stealing.
    pub fn new(workers: usize) -> Self {
        GlbConfig {
            slice: Duration::from_millis(1),
            random_steals: 0,
            lifeline_side: 2,
            lifeline_dims: min_dims(2, workers.max(1)),
            workers,
            seed: 0,
        }
    }

    /// The seven benchmark configurations, scaled to `workers`:
    ///
    /// | preset | slice | `l` | `w` |
    /// |---|---|---|---|
    /// | 1 | 1 ms | 2 | 0 |
    /// | 2 | 1 ms | 2 | 1 |
    /// | 3 | 1 ms | 2 | z |
    /// | 4 | 1 ms | P | 0 |
    /// | 5 | 1 ms | P | z |
    /// | 6 | 100 ms | 2 | 0 |
    /// | 7 | 100 ms | 2 | z |
    ///
    /// `z` is the smallest dimension with `l^z >= P`. For `P = 1` the
    /// side `P` is raised to 2.
    pub fn preset(n: u8, workers: usize) -> Result<Self, GlbError> {
        if workers == 0 {
            return Err(GlbError::NoWorkers);
        }
        let ring = workers.max(2);
        let (ms, side, steals_is_z, one_steal) = match n {
            1 => (1, 2, false, false),
            2 => (1, 2, false, true),
            3 => (1, 2, true, false),
            4 => (1, ring, false, false),
            5 => (1, ring, true, false),
            6 => (100, 2, false, false),
            7 => (100, 2, true, false),
            _ => return Err(GlbError::UnknownPreset(n)),
        };
        let dims = min_dims(side, workers);
        let random_steals = if steals_is_z {
            dims
        } else if one_steal {
            1
        } else {
            0
        };
        Ok(GlbConfig {
            slice: Duration::from_millis(ms),
            random_steals,
            lifeline_side: side,
            lifeline_dims: dims,
            workers,
            seed: 0,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_slice(mut self, slice: Duration) -> Self {
        self.slice = slice;
        self
    }

    pub fn validate(&self) -> Result<(), GlbError> {
        if self.slice.is_zero() {
            return Err(GlbError::ZeroSlice);
        }
        LifelineGraph::new(self.workers, self.lifeline_side, self.lifeline_dims).map(|_| ())
    }

    pub fn lifeline_graph(&self) -> Result<LifelineGraph, GlbError> {
        if self.slice.is_zero() {
            return Err(GlbError::ZeroSlice);
        }
        LifelineGraph::new(self.workers, self.lifeline_side, self.lifeline_dims)
    }
}

/// Per-worker timing and communication counters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WorkerStats {
    pub active_time: Duration,
    pub idle_time: Duration,
    pub distribute_time: Duration,
    /// Boxes shipped to thieves in loot and lifeline messages.
    pub sent_boxes: u64,
    pub received_boxes: u64,
    pub steal_attempts: u64,
    pub steal_successes: u64,
    pub lifeline_requests: u64,
    pub lifeline_fulfilled: u64,
    pub no_work_received: u64,
    pub messages_sent: u64,
    pub messages_received: u64,
}

impl WorkerStats {
    pub fn wall_time(&self) -> Duration {
        self.active_time + self.idle_time + self.distribute_time
    }

    /// Fraction of the worker's time spent processing boxes.
    pub fn active_ratio(&self) -> f64 {
        let total = self.wall_time().as_secs_f64();
        if total > 0.0 {
            self.active_time.as_secs_f64() / total
        } else {
            1.0
        }
    }
}

/// What one worker produced.
#[derive(Clone, Debug)]
pub struct WorkerReport {
    pub id: usize,
    pub stats: WorkerStats,
    pub search: SearchStats,
    pub paving: Paving,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    /// One OS thread per worker, crossbeam channels between them.
    #[default]
    Threads,
    /// Single-threaded round-robin stepping. Messages are delayed by up to
    /// `max_delay` rounds (per-channel order is kept).
    Simulation { max_delay: u32 },
}

impl Backend {
    pub fn simulation() -> Self {
        Backend::Simulation { max_delay: 0 }
    }
}

/// The outcome of a parallel run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub workers: Vec<WorkerReport>,
    pub wall_time: Duration,
    /// Message bookkeeping of the simulation backend.
    pub sim: Option<SimCounters>,
}

impl RunOutcome {
    /// All workers' boxes, in worker order.
    pub fn paving(&self) -> Paving {
        let mut all = Paving::new();
        for w in &self.workers {
            all.extend(w.paving.clone());
        }
        all
    }

    pub fn search_stats(&self) -> SearchStats {
        let mut total = SearchStats::default();
        for w in &self.workers {
            total.merge(&w.search);
        }
        total
    }

    pub fn total_precise(&self) -> usize {
        self.workers.iter().map(|w| w.paving.precise_count()).sum()
    }

    /// Inner boxes, uniquely certified ones included.
    pub fn total_inner(&self) -> usize {
        self.workers.iter().map(|w| w.paving.inner_count()).sum()
    }

    pub fn total_unique(&self) -> usize {
        self.workers.iter().map(|w| w.paving.unique_count()).sum()
    }

    pub fn branch_total(&self) -> u64 {
        self.workers.iter().map(|w| w.search.branch_count).sum()
    }

    pub fn mean_active_ratio(&self) -> f64 {
        let n = self.workers.len().max(1) as f64;
        self.workers.iter().map(|w| w.stats.active_ratio()).sum::<f64>() / n
    }

    /// Checks that no box was lost or duplicated: every bisection created two
    /// items, the root one more, and each was pruned exactly once; and every
    /// box sent was received.
    pub fn conservation_holds(&self) -> bool {
        let search = self.search_stats();
        let sent: u64 = self.workers.iter().map(|w| w.stats.sent_boxes).sum();
        let received: u64 = self.workers.iter().map(|w| w.stats.received_boxes).sum();
        let messages = self.sim.as_ref().is_none_or(|s| s.balanced());
        2 * search.branch_count + 1 == search.prune_calls && sent == received && messages
    }
}

/// Runs branch and prune on `cfg.workers` workers.
pub fn run_workers(
    problem: &Problem,
    eps: f64,
    cfg: &GlbConfig,
    backend: Backend,
) -> Result<RunOutcome, GlbError> {
    assert!(eps > 0.0, "precision must be positive");
    let graph = cfg.lifeline_graph()?;
    match backend {
        Backend::Threads => threads::run(problem, eps, cfg, &graph),
        Backend::Simulation { max_delay } => sim::run(problem, eps, cfg, &graph, max_delay),
    }
}
