//! Reading a problem from the text format and solving it.
//!
//! ```text
//! cargo run --release --example problem_file -- [path] [eps]
//! ```
//!
//! Defaults to the planar robot in `problems/planar3rpr.ncsp`.

use ncsp::parse::parse_problem;
use ncsp::search::solve_sequential;

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/problems/planar3rpr.ncsp").to_string());
    let eps: f64 = args.next().map_or(1e-6, |s| s.parse().expect("eps"));
    let text = std::fs::read_to_string(&path).expect("readable problem file");
    let p = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(1);
        }
    };
    println!("{p}");
    let (paving, stats) = solve_sequential(&p, eps);
    println!(
        "{} unique, {} inner, {} boundary boxes after {} branches",
        paving.unique_count(),
        paving.inner_count() - paving.unique_count(),
        paving.precise_count(),
        stats.branch_count
    );
    for b in paving.unique().take(10) {
        println!("  {b}");
    }
}
