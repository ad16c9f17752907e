//! Randomized rigor checks against exact rational arithmetic.

use ncsp::expr::{hc4_revise, Constraint, Expr, Relation};
use ncsp::interval::{Interval, IntervalBox};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

pub fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn contains(i: &Interval, r: &BigRational) -> bool {
    !i.is_empty() && (i.lo() == f64::NEG_INFINITY || q(i.lo()) <= *r) && (i.hi() == f64::INFINITY || *r <= q(i.hi()))
}

/// A float with random sign, mantissa and binary exponent in `exp`.
pub fn random_float(rng: &mut impl Rng, exp: std::ops::Range<i32>) -> f64 {
    let m: f64 = rng.gen_range(1.0..2.0);
    let e = rng.gen_range(exp);
    let x = m * 2f64.powi(e);
    match rng.gen_range(0..10) {
        0 => 0.0,
        1 => rng.gen_range(-8i32..=8) as f64,
        2..=5 => -x,
        _ => x,
    }
}

pub fn random_interval(rng: &mut impl Rng) -> Interval {
    let a = random_float(rng, -40..40);
    if rng.gen_bool(0.1) {
        return Interval::point(a);
    }
    let b = if rng.gen_bool(0.5) { random_float(rng, -40..40) } else { a + random_float(rng, -30..5).abs() };
    Interval::new(a.min(b), a.max(b))
}

/// Real numbers of an interval: both endpoints, the exact midpoint and a
/// random exact rational in between.
pub fn reals_in(i: &Interval, rng: &mut impl Rng) -> Vec<BigRational> {
    let (lo, hi) = (q(i.lo()), q(i.hi()));
    let mid = (&lo + &hi) / BigInt::from(2);
    let t = BigRational::new(BigInt::from(rng.gen_range(0..=1_000_000u32)), BigInt::from(1_000_000u32));
    let inner = &lo + (&hi - &lo) * t;
    vec![lo, hi, mid, inner]
}

fn rational_pow(x: &BigRational, k: u32) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

/// Checks `n` random operations of every kind; returns the number of
/// (operation, real) pairs whose exact result fell outside the interval result.
pub fn arithmetic_violations(n: usize, rng: &mut impl Rng) -> usize {
    let mut violations = 0;
    for k in 0..n {
        let a = random_interval(rng);
        let b = random_interval(rng);
        let xs = reals_in(&a, rng);
        let ys = reals_in(&b, rng);
        match k % 7 {
            0 => {
                let r = a.add(&b);
                violations += xs.iter().zip(&ys).filter(|(x, y)| !contains(&r, &(*x + *y))).count();
            }
            1 => {
                let r = a.sub(&b);
                violations += xs.iter().zip(&ys).filter(|(x, y)| !contains(&r, &(*x - *y))).count();
            }
            2 => {
                let r = a.mul(&b);
                violations += xs.iter().zip(&ys).filter(|(x, y)| !contains(&r, &(*x * *y))).count();
            }
            3 => {
                let r = a.div(&b);
                violations += xs
                    .iter()
                    .zip(&ys)
                    .filter(|(x, y)| !y.is_zero() && !contains(&r, &(*x / *y)))
                    .count();
            }
            4 => {
                let r = a.sqr();
                violations += xs.iter().filter(|x| !contains(&r, &rational_pow(x, 2))).count();
            }
            5 => {
                let e = rng.gen_range(3..=7);
                let r = a.powi(e);
                violations += xs.iter().filter(|x| !contains(&r, &rational_pow(x, e))).count();
            }
            _ => {
                let r = a.sqrt();
                for x in xs.iter().filter(|x| !x.is_negative()) {
                    // sqrt(x) ∈ [lo, hi]  ⇔  lo <= 0 or lo² <= x, and hi² >= x.
                    let ok = !r.is_empty()
                        && (r.lo() <= 0.0 || rational_pow(&q(r.lo()), 2) <= *x)
                        && (r.hi() == f64::INFINITY || rational_pow(&q(r.hi()), 2) >= *x);
                    violations += usize::from(!ok);
                }
            }
        }
    }
    violations
}

/// A random expression over `vars` variables without division by zero or
/// square roots, so it is defined everywhere.
pub fn random_expr(rng: &mut impl Rng, vars: usize, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) {
            Expr::var(rng.gen_range(0..vars))
        } else {
            Expr::constant(rng.gen_range(-16i32..=16) as f64 / 8.0)
        };
    }
    let a = random_expr(rng, vars, depth - 1);
    match rng.gen_range(0..7) {
        0 => a + random_expr(rng, vars, depth - 1),
        1 => a - random_expr(rng, vars, depth - 1),
        2 | 3 => a * random_expr(rng, vars, depth - 1),
        4 => -a,
        5 => a.pow(rng.gen_range(2..=3)),
        _ => a / (Expr::var(rng.gen_range(0..vars)).pow(2) + 1.0),
    }
}

/// Exact value of `e` at rational point `x`. Interval constants evaluate to
/// their lower bound.
pub fn eval_exact(e: &Expr, x: &[BigRational]) -> BigRational {
    match e {
        Expr::Var(i) => x[*i].clone(),
        Expr::Const(c) => q(c.lo()),
        Expr::Add(a, b) => eval_exact(a, x) + eval_exact(b, x),
        Expr::Sub(a, b) => eval_exact(a, x) - eval_exact(b, x),
        Expr::Mul(a, b) => eval_exact(a, x) * eval_exact(b, x),
        Expr::Div(a, b) => eval_exact(a, x) / eval_exact(b, x),
        Expr::Neg(a) => -eval_exact(a, x),
        Expr::Pow(a, k) => rational_pow(&eval_exact(a, x), *k),
        Expr::Sqrt(_) => panic!("sqrt has no exact rational value"),
    }
}

pub fn random_box(rng: &mut impl Rng, dim: usize) -> IntervalBox {
    (0..dim)
        .map(|_| {
            let a = rng.gen_range(-4.0..4.0);
            let w = rng.gen_range(0.0..3.0);
            Interval::new(a, a + w)
        })
        .collect()
}

fn random_point(rng: &mut impl Rng, b: &IntervalBox) -> Vec<f64> {
    b.components().iter().map(|c| rng.gen_range(c.lo()..=c.hi())).collect()
}

/// Interval evaluation of random expressions must contain the exact value at
/// random points of the box.
pub fn eval_violations(n: usize, rng: &mut impl Rng) -> usize {
    (0..n)
        .filter(|_| {
            let e = random_expr(rng, 3, 4);
            let b = random_box(rng, 3);
            let x = random_point(rng, &b);
            let exact = eval_exact(&e, &x.iter().map(|&v| q(v)).collect::<Vec<_>>());
            !contains(&e.eval(&b), &exact)
        })
        .count()
}

fn enclosing(r: &BigRational) -> Interval {
    let f = r.to_f64().expect("finite value");
    let mut i = Interval::new(f.next_down(), f.next_up());
    while !contains(&i, r) {
        i = Interval::new(i.lo().next_down(), i.hi().next_up());
    }
    i
}

/// Builds constraints that a random point satisfies by construction (the
/// right-hand side is an interval constant enclosing the exact value) and
/// checks that HC4Revise keeps the point. Returns the number of trials where
/// it was lost.
pub fn hc4_violations(n: usize, rng: &mut impl Rng) -> usize {
    (0..n)
        .filter(|_| {
            let e = random_expr(rng, 3, 4);
            let b = random_box(rng, 3);
            let x = random_point(rng, &b);
            let exact = eval_exact(&e, &x.iter().map(|&v| q(v)).collect::<Vec<_>>());
            let c = if rng.gen_bool(0.7) {
                Constraint::new(e - Expr::Const(enclosing(&exact)), Relation::EqZero)
            } else {
                let above = exact + BigRational::new(BigInt::one(), BigInt::from(1024));
                Constraint::new(e - Expr::Const(enclosing(&above)), Relation::LtZero)
            };
            let out = hc4_revise(&c, &b);
            !out.contains_point(&x) || !out.subset_of(&b)
        })
        .count()
}

/// A random subinterval of `i`.
pub fn shrink(i: &Interval, rng: &mut impl Rng) -> Interval {
    let (lo, hi) = (i.lo(), i.hi());
    let a = lo + (hi - lo) * rng.gen_range(0.0..=1.0);
    let b = lo + (hi - lo) * rng.gen_range(0.0..=1.0);
    Interval::new(a.min(b).max(lo), a.max(b).min(hi))
}

/// Random pairs `a ⊆ a'`, `b ⊆ b'`: the interval result on the smaller
/// inputs must lie inside the result on the larger ones.
pub fn monotonicity_violations(n: usize, rng: &mut impl Rng) -> usize {
    (0..n)
        .filter(|k| {
            let wa = random_interval(rng);
            let wb = random_interval(rng);
            let na = shrink(&wa, rng);
            let nb = shrink(&wb, rng);
            let (small, large) = match k % 6 {
                0 => (na.add(&nb), wa.add(&wb)),
                1 => (na.sub(&nb), wa.sub(&wb)),
                2 => (na.mul(&nb), wa.mul(&wb)),
                3 => (na.div(&nb), wa.div(&wb)),
                4 => (na.powi(3), wa.powi(3)),
                _ => (na.sqrt(), wa.sqrt()),
            };
            !small.subset_of(&large)
        })
        .count()
}
