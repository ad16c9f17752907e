//! Interval Newton: contraction, proofs of emptiness and proofs that a box
//! holds exactly one solution.
//!
//! ```text
//! cargo run --example newton_certification
//! ```

use ncsp::contractor::{interval_newton, prune, Certificate};
use ncsp::expr::{Constraint, Expr, Problem};
use ncsp::interval::IntervalBox;

fn square_minus_two(lo: f64, hi: f64) -> Problem {
    let x = Expr::var(0);
    Problem::with_default_names(
        IntervalBox::from_bounds(&[(lo, hi)]),
        vec![Constraint::eq_zero(x.clone() * x - 2.0)],
    )
    .unwrap()
}

fn main() {
    for (lo, hi) in [(1.0, 2.0), (1.4, 1.5), (2.0, 3.0), (-2.0, 2.0)] {
        let p = square_minus_two(lo, hi);
        let (b, cert) = interval_newton(&p, &[0], p.domain());
        println!("x^2 = 2 on [{lo}, {hi}]: {cert:?}, box {b}");
    }

    // The full prune step: propagation, then Newton on a small neighbourhood.
    let (x, y) = (Expr::var(0), Expr::var(1));
    let circle_line = |b: &[(f64, f64)]| {
        Problem::with_default_names(
            IntervalBox::from_bounds(b),
            vec![
                Constraint::eq_zero(x.clone().pow(2) + y.clone().pow(2) - 1.0),
                Constraint::eq_zero(x.clone() - y.clone()),
            ],
        )
        .unwrap()
    };
    for bounds in [[(0.6, 0.8), (0.6, 0.8)], [(0.0, 1.0), (-1.0, 1.0)], [(0.9, 1.0), (-1.0, -0.5)]] {
        let p = circle_line(&bounds);
        let out = prune(&p, p.domain());
        let tag = match out.certificate {
            Certificate::UniqueSolution => "exactly one solution",
            Certificate::EmptyProof => "no solution",
            Certificate::InnerVerified => "inner box",
            Certificate::Undecided => "undecided",
        };
        println!("circle and line on {}: {tag}, {}", p.domain(), out.boxed);
    }
}
