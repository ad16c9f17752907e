use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, Ordering};
use std::thread;
use std::time::{Duration, Instant};

use crossbeam_channel::{unbounded, Receiver, RecvTimeoutError, Sender};

use super::worker::{Outbox, Worker};
use super::{GlbConfig, GlbError, LifelineGraph, Message, RunOutcome, WorkerReport};
use crate::expr::Problem;

/// How often a blocked worker checks whether another worker has failed.
const ABORT_POLL: Duration = Duration::from_millis(50);

#[derive(Clone, Copy)]
enum Activity {
    Active,
    Distribute,
    Idle,
}

/// Attributes wall time to activities without gaps.
struct Clock {
    mark: Instant,
}

impl Clock {
    fn switch(&mut self, worker: &mut Worker<'_>, was: Activity) {
        let now = Instant::now();
        let dt = now - self.mark;
        self.mark = now;
        let s = &mut worker.stats;
        match was {
            Activity::Active => s.active_time += dt,
            Activity::Distribute => s.distribute_time += dt,
            Activity::Idle => s.idle_time += dt,
        }
    }
}

pub(super) fn run(problem: &Problem, eps: f64, cfg: &GlbConfig, graph: &LifelineGraph) -> Result<RunOutcome, GlbError> {
    let n = cfg.workers;
    let (senders, receivers): (Vec<Sender<Message>>, Vec<Receiver<Message>>) = (0..n).map(|_| unbounded()).unzip();
    let abort = AtomicBool::new(false);
    let start = Instant::now();

    let results: Vec<Result<WorkerReport, GlbError>> = thread::scope(|scope| {
        let handles: Vec<_> = receivers
            .into_iter()
            .enumerate()
            .map(|(id, rx)| {
                let senders = senders.clone();
                let abort = &abort;
                scope.spawn(move || {
                    let outcome = panic::catch_unwind(AssertUnwindSafe(|| {
                        worker_loop(Worker::new(id, problem, eps, cfg, graph), &rx, &senders, cfg.slice, abort)
                    }));
                    match outcome {
                        Ok(Some(report)) => Ok(report),
                        Ok(None) => Err(GlbError::WorkerPanicked {
                            worker: id,
                            message: "aborted after another worker failed".into(),
                        }),
                        Err(payload) => {
                            abort.store(true, Ordering::SeqCst);
                            let message = payload
                                .downcast_ref::<&str>()
                                .map(|s| s.to_string())
                                .or_else(|| payload.downcast_ref::<String>().cloned())
                                .unwrap_or_else(|| "unknown panic".into());
                            Err(GlbError::WorkerPanicked { worker: id, message })
                        }
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panics are caught")).collect()
    });

    let wall_time = start.elapsed();
    // Report the worker that actually panicked rather than those it took down.
    if let Some(e) = results
        .iter()
        .filter_map(|r| r.as_ref().err())
        .find(|e| !matches!(e, GlbError::WorkerPanicked { message, .. } if message.starts_with("aborted")))
        .or_else(|| results.iter().filter_map(|r| r.as_ref().err()).next())
    {
        return Err(e.clone());
    }
    let workers = results.into_iter().map(|r| r.unwrap()).collect();
    Ok(RunOutcome { workers, wall_time, sim: None })
}

fn worker_loop(
    mut w: Worker<'_>,
    rx: &Receiver<Message>,
    senders: &[Sender<Message>],
    slice: Duration,
    abort: &AtomicBool,
) -> Option<WorkerReport> {
    let mut out: Outbox = Vec::new();
    let mut clock = Clock { mark: Instant::now() };
    let flush = |out: &mut Outbox| {
        for (to, msg) in out.drain(..) {
            // A worker that has already terminated no longer listens.
            let _ = senders[to].send(msg);
        }
    };

    w.start(&mut out);
    flush(&mut out);
    clock.switch(&mut w, Activity::Idle);

    while !w.is_done() {
        if w.is_active() {
            w.queue.process_slice(slice);
            clock.switch(&mut w, Activity::Active);
            while let Ok(msg) = rx.try_recv() {
                w.handle(msg, &mut out);
            }
            w.after_slice(&mut out);
            flush(&mut out);
            clock.switch(&mut w, Activity::Distribute);
            continue;
        }
        w.continue_idle(&mut out);
        flush(&mut out);
        if w.is_done() {
            clock.switch(&mut w, Activity::Idle);
            break;
        }
        match rx.recv_timeout(ABORT_POLL) {
            Ok(msg) => {
                w.handle(msg, &mut out);
                while let Ok(msg) = rx.try_recv() {
                    w.handle(msg, &mut out);
                }
                if w.is_active() {
                    // Pass on work to waiting lifelines before diving in.
                    w.distribute(&mut out);
                }
                flush(&mut out);
            }
            Err(RecvTimeoutError::Timeout) => {
                if abort.load(Ordering::SeqCst) {
                    return None;
                }
            }
            Err(RecvTimeoutError::Disconnected) => unreachable!("a worker holds its own sender"),
        }
        clock.switch(&mut w, Activity::Idle);
    }

    let (paving, search) = w.queue.into_parts();
    Some(WorkerReport { id: w.id, stats: w.stats, search, paving })
}
