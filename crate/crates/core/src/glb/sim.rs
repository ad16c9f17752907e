use std::collections::VecDeque;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::worker::{Outbox, Worker};
use super::{GlbConfig, GlbError, LifelineGraph, Message, RunOutcome, WorkerReport};
use crate::expr::Problem;

/// Virtual cost of one prune call.
pub const NODE_COST: Duration = Duration::from_micros(100);

/// Bookkeeping of a simulated run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimCounters {
    pub rounds: u64,
    pub messages_sent: u64,
    pub messages_delivered: u64,
    /// Rounds times the slice duration.
    pub virtual_time: Duration,
}

impl SimCounters {
    /// Every message sent was delivered.
    pub fn balanced(&self) -> bool {
        self.messages_sent == self.messages_delivered
    }
}

struct Envelope {
    due: u64,
    msg: Message,
}

/// Steps the workers round-robin in one thread. Each round every worker
/// receives its due messages, then either processes `slice / NODE_COST`
/// nodes (at least one) and distributes, or advances its idle phase.
pub(super) fn run(
    problem: &Problem,
    eps: f64,
    cfg: &GlbConfig,
    graph: &LifelineGraph,
    max_delay: u32,
) -> Result<RunOutcome, GlbError> {
    let n = cfg.workers;
    let nodes_per_slice = (cfg.slice.as_nanos() / NODE_COST.as_nanos()).max(1) as u64;
    let mut delay_rng = ChaCha8Rng::seed_from_u64(cfg.seed.rotate_left(17) ^ 0xD1B5_4A32_D192_ED03);
    let mut workers: Vec<Worker<'_>> = (0..n).map(|id| Worker::new(id, problem, eps, cfg, graph)).collect();
    let mut inboxes: Vec<VecDeque<Envelope>> = (0..n).map(|_| VecDeque::new()).collect();
    // Per-channel latest delivery round, so channels stay FIFO under random delays.
    let mut last_due = vec![0u64; n * n];
    let mut counters = SimCounters::default();
    let mut in_flight = 0u64;

    let mut post = |from: usize, out: &mut Outbox, inboxes: &mut Vec<VecDeque<Envelope>>, round: u64, counters: &mut SimCounters, in_flight: &mut u64| {
        for (to, msg) in out.drain(..) {
            let delay = if max_delay > 0 { delay_rng.gen_range(0..=max_delay as u64) } else { 0 };
            let slot = &mut last_due[from * n + to];
            let due = (round + delay).max(*slot);
            *slot = due;
            inboxes[to].push_back(Envelope { due, msg });
            counters.messages_sent += 1;
            *in_flight += 1;
        }
    };

    let mut out: Outbox = Vec::new();
    for w in workers.iter_mut() {
        w.start(&mut out);
        let id = w.id;
        post(id, &mut out, &mut inboxes, 0, &mut counters, &mut in_flight);
    }

    let mut round = 0u64;
    loop {
        if in_flight == 0 && workers.iter().all(|w| w.is_done()) {
            break;
        }
        let mut progress = false;
        for id in 0..n {
            let w = &mut workers[id];
            let inbox = &mut inboxes[id];
            let mut k = 0;
            while k < inbox.len() {
                if inbox[k].due <= round {
                    let env = inbox.remove(k).expect("index in range");
                    in_flight -= 1;
                    counters.messages_delivered += 1;
                    w.handle(env.msg, &mut out);
                    progress = true;
                } else {
                    k += 1;
                }
            }
            if w.is_done() {
                post(id, &mut out, &mut inboxes, round, &mut counters, &mut in_flight);
                continue;
            }
            if w.is_active() {
                let before = w.queue.stats().prune_calls;
                w.queue.process_nodes(nodes_per_slice);
                let done = w.queue.stats().prune_calls - before;
                let active = NODE_COST * done as u32;
                w.stats.active_time += active;
                w.stats.idle_time += cfg.slice.saturating_sub(active);
                w.after_slice(&mut out);
                progress = true;
            } else {
                w.continue_idle(&mut out);
                w.stats.idle_time += cfg.slice;
            }
            if !out.is_empty() {
                progress = true;
            }
            post(id, &mut out, &mut inboxes, round, &mut counters, &mut in_flight);
        }
        round += 1;
        if !progress && in_flight == 0 && !workers.iter().all(|w| w.is_done()) {
            return Err(GlbError::SimulationStalled { rounds: round });
        }
    }

    counters.rounds = round;
    counters.virtual_time = cfg.slice * round as u32;
    let reports = workers
        .into_iter()
        .map(|w| {
            let id = w.id;
            let stats = w.stats;
            let (paving, search) = w.queue.into_parts();
            WorkerReport { id, stats, search, paving }
        })
        .collect();
    Ok(RunOutcome { workers: reports, wall_time: counters.virtual_time, sim: Some(counters) })
}
