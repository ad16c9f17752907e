//! Certified solutions of the economics system.
//!
//! ```text
//! cargo run --release --example eco_solutions -- [k] [eps]
//! ```
//!
//! Defaults to `k = 8`, `eps = 1e-8`. Each box is proven to hold exactly one
//! solution; a plain floating-point Newton iteration started at its midpoint
//! shows where.

use std::time::Instant;

use ncsp::builtin::eco;
use ncsp::expr::Problem;
use ncsp::search::solve_sequential;

/// Floating-point Newton iteration from `x` (Gaussian elimination).
fn polish(p: &Problem, mut x: Vec<f64>) -> Vec<f64> {
    let n = p.dim();
    let eqs: Vec<_> = p.equations().map(|c| c.body().clone()).collect();
    for _ in 0..20 {
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut row: Vec<f64> = (0..n).map(|j| p.derivative(i, j).eval_point(&x)).collect();
                row.push(-eqs[i].eval_point(&x));
                row
            })
            .collect();
        for c in 0..n {
            let r = (c..n).max_by(|&r, &s| a[r][c].abs().total_cmp(&a[s][c].abs())).unwrap();
            a.swap(c, r);
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                for k in c..=n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
        for c in (0..n).rev() {
            let s: f64 = (c + 1..n).map(|k| a[c][k] * a[k][n]).sum();
            a[c][n] = (a[c][n] - s) / a[c][c];
        }
        for i in 0..n {
            x[i] += a[i][n];
        }
    }
    x
}

fn main() {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().map_or(8, |s| s.parse().expect("k"));
    let eps: f64 = args.next().map_or(1e-8, |s| s.parse().expect("eps"));
    let p = eco(k);
    let t = Instant::now();
    let (paving, stats) = solve_sequential(&p, eps);
    println!(
        "eco{k}, eps {eps:e}: {} certified, {} undecided boxes, {} branches, {:.2?}",
        paving.unique_count(),
        paving.precise_count(),
        stats.branch_count,
        t.elapsed()
    );
    for b in paving.unique() {
        let x = polish(&p, b.midpoint().unwrap());
        let residual = p.equations().map(|c| c.body().eval_point(&x).abs()).fold(0.0, f64::max);
        let inside = b.contains_point(&x);
        let coords: Vec<String> = x.iter().map(|v| format!("{v:+.6}")).collect();
        println!("  ({})  residual {residual:.1e}  in box: {inside}", coords.join(", "));
    }
}
