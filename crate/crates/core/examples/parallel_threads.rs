//! Parallel solving on OS threads with each of the seven preset
//! configurations, checked against the sequential paving.
//!
//! ```text
//! cargo run --release --example parallel_threads -- [workers] [problem] [eps]
//! ```
//!
//! `problem` is a builtin name (default `eco6`, eps `1e-8`).

use std::time::Instant;

use ncsp::builtin::Builtin;
use ncsp::glb::{run_workers, Backend, GlbConfig};
use ncsp::report::RunReport;
use ncsp::search::solve_sequential;

fn main() {
    let mut args = std::env::args().skip(1);
    let workers: usize = args.next().map_or(4, |s| s.parse().expect("workers"));
    let problem: Builtin = args.next().as_deref().unwrap_or("eco6").parse().expect("builtin name");
    let eps: f64 = args.next().map_or(1e-8, |s| s.parse().expect("eps"));
    let p = problem.problem();

    let t = Instant::now();
    let (reference, _) = solve_sequential(&p, eps);
    let sequential = t.elapsed();
    let reference = reference.canonical();
    println!("{} sequential: {} boxes in {sequential:.2?}", problem.name(), reference.len());

    for preset in 1..=7 {
        let cfg = GlbConfig::preset(preset, workers).unwrap().with_seed(preset as u64);
        let out = run_workers(&p, eps, &cfg, Backend::Threads).expect("run");
        let report = RunReport::new(problem.name(), eps, cfg, Backend::Threads, &out);
        println!(
            "preset {preset}: {:.2?}, active ratio {:.2}, {} boxes sent, same paving: {}",
            out.wall_time,
            report.mean_active_ratio(),
            report.sent_boxes(),
            out.paving().canonical() == reference
        );
    }
}
