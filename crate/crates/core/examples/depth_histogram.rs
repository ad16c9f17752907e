//! Number of search nodes per depth of the branch-and-prune tree.
//!
//! ```text
//! cargo run --release --example depth_histogram -- [k] [eps]
//! ```

use ncsp::builtin::eco;
use ncsp::search::solve_sequential;

fn main() {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().map_or(8, |s| s.parse().expect("k"));
    let eps: f64 = args.next().map_or(1e-8, |s| s.parse().expect("eps"));
    let (_, stats) = solve_sequential(&eco(k), eps);
    let peak = stats.per_depth.values().copied().max().unwrap_or(1);
    for (depth, count) in &stats.per_depth {
        let bar = "#".repeat((count * 60).div_ceil(peak) as usize);
        println!("{depth:>4} {count:>7} {bar}");
    }
}
