//! The deterministic simulation backend: the same workers stepped
//! round-robin in one thread, with seeded random victims and optional
//! message delays. Runs are reproducible bit for bit.
//!
//! ```text
//! cargo run --release --example simulation -- [workers] [seeds]
//! ```

use ncsp::builtin::disks;
use ncsp::glb::{run_workers, Backend, GlbConfig};
use ncsp::search::solve_sequential;

fn main() {
    let mut args = std::env::args().skip(1);
    let workers: usize = args.next().map_or(16, |s| s.parse().expect("workers"));
    let seeds: u64 = args.next().map_or(5, |s| s.parse().expect("seeds"));
    let eps = 0.05;
    let p = disks();
    let (reference, _) = solve_sequential(&p, eps);
    let reference = reference.canonical();

    for seed in 0..seeds {
        let cfg = GlbConfig::preset(3, workers).unwrap().with_seed(seed);
        let backend = Backend::Simulation { max_delay: 2 };
        let out = run_workers(&p, eps, &cfg, backend).expect("run");
        let again = run_workers(&p, eps, &cfg, backend).expect("run");
        let sim = out.sim.as_ref().unwrap();
        let steals: u64 = out.workers.iter().map(|w| w.stats.steal_attempts).sum();
        let lifelines: u64 = out.workers.iter().map(|w| w.stats.lifeline_fulfilled).sum();
        println!(
            "seed {seed}: {} rounds, {} messages, {steals} random steals, {lifelines} lifeline deliveries, \
             conserved: {}, matches sequential: {}, reproducible: {}",
            sim.rounds,
            sim.messages_sent,
            out.conservation_holds(),
            out.paving().canonical() == reference,
            again.sim == out.sim
        );
    }
}
