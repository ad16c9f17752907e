//! Run summaries and the statistics and paving files.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use crate::glb::{Backend, GlbConfig, RunOutcome, WorkerStats};
use crate::search::{Paving, SearchStats};

/// Everything reported about one solver run.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub problem: String,
    pub eps: f64,
    pub config: GlbConfig,
    pub backend: Backend,
    pub wall_time: Duration,
    pub total_precise: usize,
    /// Inner boxes, uniquely certified ones included.
    pub total_inner: usize,
    pub total_unique: usize,
    pub branch_total: u64,
    pub per_worker: Vec<(WorkerStats, SearchStats)>,
    /// Number of search nodes processed at each depth.
    pub per_depth: BTreeMap<u32, u64>,
}

impl RunReport {
    pub fn new(problem: impl Into<String>, eps: f64, config: GlbConfig, backend: Backend, outcome: &RunOutcome) -> Self {
        RunReport {
            problem: problem.into(),
            eps,
            config,
            backend,
            wall_time: outcome.wall_time,
            total_precise: outcome.total_precise(),
            total_inner: outcome.total_inner(),
            total_unique: outcome.total_unique(),
            branch_total: outcome.branch_total(),
            per_worker: outcome.workers.iter().map(|w| (w.stats.clone(), w.search.clone())).collect(),
            per_depth: outcome.search_stats().per_depth,
        }
    }

    pub fn mean_active_ratio(&self) -> f64 {
        let n = self.per_worker.len().max(1) as f64;
        self.per_worker.iter().map(|(s, _)| s.active_ratio()).sum::<f64>() / n
    }

    pub fn sent_boxes(&self) -> u64 {
        self.per_worker.iter().map(|(s, _)| s.sent_boxes).sum()
    }

    /// Per-worker rows, a blank line, then the depth histogram.
    pub fn write_stats_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "worker_id,active_s,idle_s,distribute_s,sent_boxes,received_boxes,prune_calls,branches")?;
        for (id, (s, search)) in self.per_worker.iter().enumerate() {
            writeln!(
                w,
                "{id},{:.6},{:.6},{:.6},{},{},{},{}",
                s.active_time.as_secs_f64(),
                s.idle_time.as_secs_f64(),
                s.distribute_time.as_secs_f64(),
                s.sent_boxes,
                s.received_boxes,
                search.prune_calls,
                search.branch_count
            )?;
        }
        writeln!(w)?;
        writeln!(w, "depth,path_count")?;
        for (d, c) in &self.per_depth {
            writeln!(w, "{d},{c}")?;
        }
        Ok(())
    }

    pub fn emit_stats_csv(&self, path: impl AsRef<Path>) -> io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_stats_csv(&mut w)?;
        w.flush()
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        let backend = match self.backend {
            Backend::Threads => "threads".to_string(),
            Backend::Simulation { max_delay: 0 } => "sim".to_string(),
            Backend::Simulation { max_delay } => format!("sim (delay <= {max_delay})"),
        };
        writeln!(f, "problem       {}", self.problem)?;
        writeln!(f, "eps           {:e}", self.eps)?;
        writeln!(
            f,
            "config        P={} n={}s w={} l={} z={} seed={} backend={backend}",
            c.workers,
            c.slice.as_secs_f64(),
            c.random_steals,
            c.lifeline_side,
            c.lifeline_dims,
            c.seed
        )?;
        let clock = if matches!(self.backend, Backend::Threads) { "" } else { " (virtual)" };
        writeln!(f, "wall time     {:.3}s{clock}", self.wall_time.as_secs_f64())?;
        writeln!(
            f,
            "boxes         {} precise, {} inner ({} unique solutions)",
            self.total_precise, self.total_inner, self.total_unique
        )?;
        writeln!(f, "branches      {}", self.branch_total)?;
        writeln!(f, "sent boxes    {}", self.sent_boxes())?;
        write!(f, "active ratio  {:.3}", self.mean_active_ratio())
    }
}

/// Writes the paving file: one `TAG<TAB>box` line per box.
pub fn emit_paving(paving: &Paving, path: impl AsRef<Path>) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    paving.write_to(&mut w)?;
    w.flush()
}
