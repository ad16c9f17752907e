//! An under-constrained problem: the circle where the unit sphere meets the
//! plane `x + y + z = 0`. Inner boxes are proven to contain, for every value
//! of the free variables, a solution in the dependent ones.
//!
//! ```text
//! cargo run --release --example sphere_plane -- [dim] [eps]
//! ```

use ncsp::builtin::sphere_plane;
use ncsp::search::solve_sequential;

fn main() {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().map_or(3, |s| s.parse().expect("dim"));
    let eps: f64 = args.next().map_or(0.05, |s| s.parse().expect("eps"));
    let p = sphere_plane(d);
    println!("{p}");
    let (paving, stats) = solve_sequential(&p, eps);
    println!(
        "eps {eps}: {} inner, {} boundary boxes, {} branches",
        paving.inner_count(),
        paving.precise_count(),
        stats.branch_count
    );
    if d == 3 {
        // The circle is spanned by two orthonormal vectors of the plane.
        let u = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
        let v = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
        let samples = 1000;
        let covered = (0..samples)
            .filter(|i| {
                let t = *i as f64 / samples as f64 * std::f64::consts::TAU;
                let x: Vec<f64> = (0..3).map(|k| t.cos() * u[k] + t.sin() * v[k]).collect();
                paving.covers(&x)
            })
            .count();
        println!("circle points covered by the paving: {covered}/{samples}");
    }
}
