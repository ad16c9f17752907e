//! Paving of the intersection of two disks, drawn as text and written to a
//! paving file.
//!
//! ```text
//! cargo run --release --example disks_paving -- [eps] [paving-file]
//! ```

use ncsp::builtin::disks;
use ncsp::report::emit_paving;
use ncsp::search::{solve_sequential, BoxKind};

const COLS: usize = 64;
const ROWS: usize = 32;

fn main() {
    let mut args = std::env::args().skip(1);
    let eps: f64 = args.next().map_or(0.02, |s| s.parse().expect("eps"));
    let p = disks();
    let (paving, stats) = solve_sequential(&p, eps);
    println!(
        "eps {eps}: {} inner, {} boundary boxes, {} branches",
        paving.inner_count(),
        paving.precise_count(),
        stats.branch_count
    );

    // Project onto (v1, v2): '#' inner, '+' boundary.
    let mut grid = vec![vec![' '; COLS]; ROWS];
    let cell = |v: f64, lo: f64, hi: f64, n: usize| (((v - lo) / (hi - lo)) * n as f64).clamp(0.0, n as f64 - 1.0) as usize;
    for (kind, b) in paving.boxes() {
        let (x, y) = (b.get(0), b.get(1));
        let mark = if *kind == BoxKind::Precise { '+' } else { '#' };
        for r in cell(-y.hi(), -1.0, 1.0, ROWS)..=cell(-y.lo(), -1.0, 1.0, ROWS) {
            for c in cell(x.lo(), -1.0, 1.0, COLS)..=cell(x.hi(), -1.0, 1.0, COLS) {
                if grid[r][c] != '#' {
                    grid[r][c] = mark;
                }
            }
        }
    }
    for row in grid {
        println!("|{}|", row.into_iter().collect::<String>());
    }

    if let Some(path) = args.next() {
        emit_paving(&paving, &path).expect("write paving");
        println!("paving written to {path}");
    }
}
