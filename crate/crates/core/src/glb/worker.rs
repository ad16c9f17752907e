use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Credit, GlbConfig, LifelineGraph, Message, WorkerStats};
use crate::expr::Problem;
use crate::search::TaskQueue;

pub(crate) const ROOT: usize = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Phase {
    Active,
    /// Idle phase 1: random steal attempts not yet sent.
    RandomSteal { attempts_left: u32 },
    /// Idle phase 2: waiting for a lifeline to deliver.
    Lifeline,
    Done,
}

#[derive(Clone, Copy, Debug)]
struct Request {
    thief: usize,
    via_lifeline: bool,
}

/// Outgoing messages of one step, as `(destination, message)`.
pub(crate) type Outbox = Vec<(usize, Message)>;

/// The backend-independent part of a worker.
pub(crate) struct Worker<'p> {
    pub id: usize,
    workers: usize,
    random_steals: u32,
    pub queue: TaskQueue<'p>,
    credit: Credit,
    rng: ChaCha8Rng,
    lifelines: Vec<usize>,
    activated: Vec<bool>,
    pending: VecDeque<Request>,
    awaiting_reply: bool,
    pub phase: Phase,
    pub stats: WorkerStats,
}

impl<'p> Worker<'p> {
    pub fn new(id: usize, problem: &'p Problem, eps: f64, cfg: &GlbConfig, graph: &LifelineGraph) -> Self {
        let root = id == ROOT;
        let queue = if root {
            TaskQueue::with_root(problem, eps)
        } else {
            TaskQueue::new(problem, eps)
        };
        let lifelines = graph.lifelines(id).to_vec();
        Worker {
            id,
            workers: cfg.workers,
            random_steals: cfg.random_steals,
            queue,
            credit: if root { Credit::full() } else { Credit::default() },
            rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ (id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
            activated: vec![false; lifelines.len()],
            lifelines,
            pending: VecDeque::new(),
            awaiting_reply: false,
            phase: if root { Phase::Active } else { Phase::Lifeline },
            stats: WorkerStats::default(),
        }
    }

    /// Non-root workers begin idle and immediately start stealing.
    pub fn start(&mut self, out: &mut Outbox) {
        if !self.is_active() {
            self.go_idle(out);
        }
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    pub fn is_active(&self) -> bool {
        self.phase == Phase::Active
    }

    fn send(&mut self, out: &mut Outbox, to: usize, msg: Message) {
        self.stats.messages_sent += 1;
        out.push((to, msg));
    }

    /// Reacts to one incoming message.
    pub fn handle(&mut self, msg: Message, out: &mut Outbox) {
        self.stats.messages_received += 1;
        if self.is_done() {
            return;
        }
        match msg {
            Message::StealRequest { thief, via_lifeline } => {
                if self.is_active() {
                    self.pending.push_back(Request { thief, via_lifeline });
                } else if via_lifeline {
                    // Remembered until this worker has work to pass on.
                    self.pending.push_back(Request { thief, via_lifeline });
                } else {
                    self.send(out, thief, Message::NoWork { from: self.id });
                }
            }
            Message::Loot { items, credit, .. } => {
                self.awaiting_reply = false;
                self.stats.steal_successes += 1;
                self.receive(items, credit);
            }
            Message::LifelineFulfill { from, items, credit } => {
                if let Some(j) = self.lifelines.iter().position(|&v| v == from) {
                    self.activated[j] = false;
                }
                self.stats.lifeline_fulfilled += 1;
                self.receive(items, credit);
            }
            Message::NoWork { .. } => {
                self.awaiting_reply = false;
                self.stats.no_work_received += 1;
            }
            Message::ReturnCredit(c) => self.credit.absorb(c),
            Message::Terminate => self.phase = Phase::Done,
        }
    }

    fn receive(&mut self, items: Vec<crate::search::WorkItem>, credit: u32) {
        debug_assert!(!items.is_empty());
        self.stats.received_boxes += items.len() as u64;
        self.credit.add_term(credit);
        self.queue.merge(items);
        self.phase = Phase::Active;
    }

    /// Serves pending requests in arrival order. Random thieves get half the
    /// queue or `NoWork`; lifeline thieves get half the queue or keep waiting.
    pub fn distribute(&mut self, out: &mut Outbox) {
        let mut still_pending = VecDeque::new();
        while let Some(req) = self.pending.pop_front() {
            if self.queue.len() >= 2 {
                let items = self.queue.split();
                self.stats.sent_boxes += items.len() as u64;
                let credit = self.credit.split_off();
                let msg = if req.via_lifeline {
                    Message::LifelineFulfill { from: self.id, items, credit }
                } else {
                    Message::Loot { from: self.id, items, credit }
                };
                self.send(out, req.thief, msg);
            } else if req.via_lifeline {
                still_pending.push_back(req);
            } else {
                self.send(out, req.thief, Message::NoWork { from: self.id });
            }
        }
        self.pending = still_pending;
    }

    /// Call after a processing slice: hands out work, and starts the idle
    /// phases if the queue ran dry.
    pub fn after_slice(&mut self, out: &mut Outbox) {
        self.distribute(out);
        if self.queue.is_empty() {
            self.go_idle(out);
        }
    }

    fn go_idle(&mut self, out: &mut Outbox) {
        self.phase = if self.random_steals > 0 && self.workers > 1 {
            Phase::RandomSteal { attempts_left: self.random_steals }
        } else {
            Phase::Lifeline
        };
        if self.id != ROOT && !self.credit.is_zero() {
            let c = self.credit.take();
            self.send(out, ROOT, Message::ReturnCredit(c));
        }
        // Pending random thieves cannot be served any more.
        self.distribute(out);
        self.continue_idle(out);
    }

    /// Advances the idle phases: sends the next random steal request, or the
    /// lifeline requests, and detects termination on the root.
    pub fn continue_idle(&mut self, out: &mut Outbox) {
        if self.is_active() || self.is_done() {
            return;
        }
        if self.maybe_terminate(out) {
            return;
        }
        if let Phase::RandomSteal { attempts_left } = self.phase {
            if self.awaiting_reply {
                return;
            }
            if attempts_left > 0 {
                let victim = self.random_victim();
                self.stats.steal_attempts += 1;
                self.awaiting_reply = true;
                self.phase = Phase::RandomSteal { attempts_left: attempts_left - 1 };
                self.send(out, victim, Message::StealRequest { thief: self.id, via_lifeline: false });
                return;
            }
            self.phase = Phase::Lifeline;
        }
        for j in 0..self.lifelines.len() {
            if !self.activated[j] {
                self.activated[j] = true;
                self.stats.lifeline_requests += 1;
                let to = self.lifelines[j];
                self.send(out, to, Message::StealRequest { thief: self.id, via_lifeline: true });
            }
        }
    }

    fn random_victim(&mut self) -> usize {
        let r = self.rng.gen_range(0..self.workers - 1);
        if r >= self.id {
            r + 1
        } else {
            r
        }
    }

    /// The root, idle and holding all credit, knows no work exists anywhere.
    fn maybe_terminate(&mut self, out: &mut Outbox) -> bool {
        if self.id != ROOT || !self.queue.is_empty() || self.awaiting_reply || !self.credit.is_full() {
            return false;
        }
        for w in 1..self.workers {
            self.send(out, w, Message::Terminate);
        }
        self.phase = Phase::Done;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::eco;
    use crate::search::WorkItem;

    fn worker_with_queue(p: &Problem, len: usize, workers: usize) -> Worker<'_> {
        let cfg = GlbConfig::new(workers);
        let graph = cfg.lifeline_graph().unwrap();
        let mut w = Worker::new(0, p, 1e-3, &cfg, &graph);
        w.queue = TaskQueue::new(p, 1e-3);
        w.queue.merge((0..len).map(|_| WorkItem::root(p.domain().clone())).collect());
        w
    }

    fn items_sent(out: &Outbox) -> Vec<(usize, usize)> {
        out.iter()
            .filter_map(|(to, m)| match m {
                Message::Loot { items, .. } | Message::LifelineFulfill { items, .. } => Some((*to, items.len())),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn one_thief_gets_half_rounded_down() {
        let p = eco(4);
        let mut w = worker_with_queue(&p, 5, 4);
        let mut out = Vec::new();
        w.handle(Message::StealRequest { thief: 2, via_lifeline: false }, &mut out);
        w.distribute(&mut out);
        assert_eq!(items_sent(&out), vec![(2, 2)]);
        assert_eq!(w.queue.len(), 3);
        assert_eq!(w.stats.sent_boxes, 2);
    }

    #[test]
    fn short_queue_answers_no_work() {
        let p = eco(4);
        let mut w = worker_with_queue(&p, 1, 4);
        let mut out = Vec::new();
        w.handle(Message::StealRequest { thief: 3, via_lifeline: false }, &mut out);
        w.handle(Message::StealRequest { thief: 1, via_lifeline: true }, &mut out);
        w.distribute(&mut out);
        assert_eq!(out.len(), 1);
        assert!(matches!(out[0], (3, Message::NoWork { from: 0 })));
        // the lifeline request is kept
        w.queue.merge(vec![WorkItem::root(p.domain().clone())]);
        out.clear();
        w.distribute(&mut out);
        assert_eq!(items_sent(&out), vec![(1, 1)]);
    }

    #[test]
    fn sequential_lifeline_splits() {
        let p = eco(4);
        let mut w = worker_with_queue(&p, 8, 8);
        let mut out = Vec::new();
        w.handle(Message::StealRequest { thief: 1, via_lifeline: true }, &mut out);
        w.handle(Message::StealRequest { thief: 2, via_lifeline: true }, &mut out);
        w.distribute(&mut out);
        assert_eq!(items_sent(&out), vec![(1, 4), (2, 2)]);
        assert_eq!(w.queue.len(), 2);
    }

    #[test]
    fn victims_exclude_self() {
        let p = eco(4);
        let cfg = GlbConfig::new(3);
        let graph = cfg.lifeline_graph().unwrap();
        let mut w = Worker::new(1, &p, 1e-3, &cfg, &graph);
        let mut seen = [0; 3];
        for _ in 0..300 {
            seen[w.random_victim()] += 1;
        }
        assert_eq!(seen[1], 0);
        assert!(seen[0] > 0 && seen[2] > 0);
    }

    fn steal_targets(out: &Outbox) -> (usize, usize) {
        let random = out.iter().filter(|(_, m)| matches!(m, Message::StealRequest { via_lifeline: false, .. })).count();
        let lifeline = out.iter().filter(|(_, m)| matches!(m, Message::StealRequest { via_lifeline: true, .. })).count();
        (random, lifeline)
    }

    #[test]
    fn w_no_work_replies_then_lifelines() {
        let p = eco(4);
        let cfg = GlbConfig::preset(3, 8).unwrap();
        let graph = cfg.lifeline_graph().unwrap();
        let mut w = Worker::new(5, &p, 1e-3, &cfg, &graph);
        let mut out = Vec::new();
        w.start(&mut out);
        for k in 0..3 {
            assert_eq!(steal_targets(&out), (1, 0), "attempt {k}");
            let (victim, _) = out[0];
            out.clear();
            w.handle(Message::NoWork { from: victim }, &mut out);
            w.continue_idle(&mut out);
        }
        assert_eq!(steal_targets(&out), (0, 3));
        assert_eq!(w.stats.no_work_received, 3);
        assert_eq!(w.phase, Phase::Lifeline);
    }

    #[test]
    fn successful_steal_skips_lifelines() {
        let p = eco(4);
        let cfg = GlbConfig::preset(3, 8).unwrap();
        let graph = cfg.lifeline_graph().unwrap();
        let mut w = Worker::new(5, &p, 1e-3, &cfg, &graph);
        let mut out = Vec::new();
        w.start(&mut out);
        let (victim, _) = out[0];
        out.clear();
        let credit = Credit::full().split_off();
        let items = vec![WorkItem::root(p.domain().clone()); 2];
        w.handle(Message::Loot { from: victim, items, credit }, &mut out);
        w.continue_idle(&mut out);
        assert!(w.is_active());
        assert_eq!(steal_targets(&out), (0, 0));
        assert_eq!(w.stats.lifeline_requests, 0);
        assert_eq!(w.stats.steal_successes, 1);
    }
}
