//! Outward-rounded interval arithmetic.
//!
//! ```text
//! cargo run --example interval_arithmetic
//! ```

use ncsp::interval::{Interval, IntervalBox};

fn main() {
    // 0.1 has no exact binary form; the literal is enclosed by its two neighbours.
    let tenth = Interval::from_decimal("0.1").unwrap();
    let sum = tenth.add(&tenth).add(&tenth);
    println!("0.1                 = {tenth}");
    println!("0.1 + 0.1 + 0.1     = {sum}");
    println!("contains 0.3?         {}", sum.contains(0.3));

    // Exact operations stay exact.
    let a = Interval::new(1.0, 2.0);
    let b = Interval::new(3.0, 4.0);
    println!("[1,2] + [3,4]       = {}", a.add(&b));
    println!("[1,2] * [-1,3]      = {}", a.mul(&Interval::new(-1.0, 3.0)));
    println!("[1,2] / [4,8]       = {}", a.div(&Interval::new(4.0, 8.0)));

    // Division by an interval containing zero.
    println!("[1,2] / [-1,1]      = {}", a.div(&Interval::new(-1.0, 1.0)));
    println!("[1,2] / [0,1]       = {}", a.div(&Interval::new(0.0, 1.0)));
    println!("[1,2] / [0,0]       = {}", a.div(&Interval::ZERO));

    // Powers, roots and the projections used by propagation.
    let x = Interval::new(-2.0, 3.0);
    println!("[-2,3]^2            = {}", x.powi(2));
    println!("[-2,3]^3            = {}", x.powi(3));
    println!("sqrt([2,2])         = {}", Interval::point(2.0).sqrt());
    println!("{{x : x^2 in [4,9]}} = {}", Interval::new(4.0, 9.0).root_preimage(2));
    println!("  restricted to [0,10] = {}", Interval::new(4.0, 9.0).pow_preimage_within(2, &Interval::new(0.0, 10.0)));

    // Boxes.
    let b = IntervalBox::from_bounds(&[(-1.0, 1.0), (0.0, 4.0)]);
    let (left, right) = b.bisect(1).unwrap();
    println!("box {b} splits into {left} and {right}");
    println!("width {:?}, midpoint {:?}", b.width(), b.midpoint());
}
