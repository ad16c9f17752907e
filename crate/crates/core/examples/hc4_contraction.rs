//! Forward-backward constraint propagation (HC4Revise) on single constraints
//! and to a fixed point over a whole problem.
//!
//! ```text
//! cargo run --example hc4_contraction
//! ```

use ncsp::contractor::hc4_fixed_point;
use ncsp::expr::{hc4_revise, Constraint, Expr, Problem};
use ncsp::interval::IntervalBox;

fn main() {
    let (x, y) = (Expr::var(0), Expr::var(1));

    // x + y = 0 with x in [1,2] forces y into [-2,-1].
    let c = Constraint::eq_zero(x.clone() + y.clone());
    let b = IntervalBox::from_bounds(&[(1.0, 2.0), (-10.0, 10.0)]);
    println!("x + y = 0      on {b}\n  -> {}", hc4_revise(&c, &b));

    // x^2 = 4 on [-1, 10] keeps only the positive root.
    let c = Constraint::eq_zero(x.clone().pow(2) - 4.0);
    let b = IntervalBox::from_bounds(&[(-1.0, 10.0)]);
    println!("x^2 - 4 = 0    on {b}\n  -> {}", hc4_revise(&c, &b));

    // An inequality that cannot hold empties the box.
    let c = Constraint::lt_zero(x.clone().pow(2) + 1.0);
    let b = IntervalBox::from_bounds(&[(-3.0, 3.0)]);
    println!("x^2 + 1 < 0    on {b}\n  -> {}", hc4_revise(&c, &b));

    // Propagating several constraints until they stop making progress.
    let p = Problem::with_default_names(
        IntervalBox::from_bounds(&[(0.0, 10.0), (0.0, 10.0)]),
        vec![
            Constraint::eq_zero(x.clone() * y.clone() - 1.0),
            Constraint::eq_zero(x.clone() - y.clone()),
        ],
    )
    .unwrap();
    println!("{p}");
    println!("fixed point: {}", hc4_fixed_point(&p, p.domain()));
}
