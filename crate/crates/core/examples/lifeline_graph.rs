//! The lifeline graphs used for work stealing.
//!
//! ```text
//! cargo run --example lifeline_graph -- [workers] [side]
//! ```

use ncsp::glb::{min_dims, LifelineGraph};

fn main() {
    let mut args = std::env::args().skip(1);
    let workers: usize = args.next().map_or(8, |s| s.parse().expect("workers"));
    let side: usize = args.next().map_or(2, |s| s.parse().expect("side"));
    let dims = min_dims(side, workers);
    let g = LifelineGraph::new(workers, side, dims).expect("valid parameters");
    println!("{workers} workers, side {side}, dimension {dims}");
    for u in 0..workers.min(32) {
        println!("  {u:>3} -> {:?}", g.lifelines(u));
    }
    if workers > 32 {
        println!("  ...");
    }
    let diameter = (0..workers).filter_map(|u| g.eccentricity(u)).max().unwrap_or(0);
    println!("strongly connected: {}, diameter {diameter}", g.is_strongly_connected());

    // Binary graphs reach everyone within z hops.
    let worst = (1..=1024)
        .map(|p| {
            let z = min_dims(2, p);
            let g = LifelineGraph::new(p, 2, z).unwrap();
            (0..p).map(|u| g.eccentricity(u).unwrap()).max().unwrap() as i64 - z as i64
        })
        .max()
        .unwrap();
    println!("P <= 1024, side 2: max(eccentricity - z) = {worst}");
}
