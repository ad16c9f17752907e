#![allow(dead_code)]

use ncsp::expr::{Expr, Problem};
use ncsp::interval::IntervalBox;
use rand::Rng;

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let r = (c..n).max_by(|&r, &s| a[r][c].abs().total_cmp(&a[s][c].abs()))?;
        if a[r][c] == 0.0 || !a[r][c].is_finite() {
            return None;
        }
        a.swap(c, r);
        b.swap(c, r);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| a[c][k] * b[k]).sum();
        b[c] = (b[c] - s) / a[c][c];
    }
    Some(b)
}

pub fn equations(p: &Problem) -> Vec<Expr> {
    p.equations().map(|c| c.body().clone()).collect()
}

pub fn residual(p: &Problem, x: &[f64]) -> f64 {
    p.equations().map(|c| c.body().eval_point(x).abs()).fold(0.0, f64::max)
}

/// Floating-point Newton on the equations, moving only the variables in
/// `dependents` (one per equation); the rest stay fixed.
pub fn polish_dependents(p: &Problem, dependents: &[usize], mut x: Vec<f64>) -> Option<Vec<f64>> {
    let eqs = equations(p);
    for _ in 0..30 {
        let a: Vec<Vec<f64>> = (0..eqs.len())
            .map(|i| dependents.iter().map(|&j| p.derivative(i, j).eval_point(&x)).collect())
            .collect();
        let b: Vec<f64> = eqs.iter().map(|e| -e.eval_point(&x)).collect();
        let dx = solve_linear(a, b)?;
        for (k, &j) in dependents.iter().enumerate() {
            x[j] += dx[k];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
    }
    Some(x)
}

/// Newton polish of a square system from the box midpoint: the point it
/// converges to, if that lies in the box with residual below `tol`.
pub fn polished_solution(p: &Problem, b: &IntervalBox, tol: f64) -> Option<Vec<f64>> {
    let all: Vec<usize> = (0..p.dim()).collect();
    let x = polish_dependents(p, &all, b.midpoint()?)?;
    (b.contains_point(&x) && residual(p, &x) < tol).then_some(x)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn uniform_in(b: &IntervalBox, rng: &mut impl Rng) -> Vec<f64> {
    b.components()
        .iter()
        .map(|c| if c.lo() < c.hi() { rng.gen_range(c.lo()..=c.hi()) } else { c.lo() })
        .collect()
}

/// Sampling oracle for inner boxes: for some choice of dependent variables,
/// every one of `samples` random parameter points extends by Newton to a
/// solution inside the box at which all inequalities hold strictly.
pub fn inner_box_confirmed(p: &Problem, b: &IntervalBox, samples: usize, rng: &mut impl Rng) -> bool {
    let eqs = p.equation_count();
    let inequalities_hold = |x: &[f64]| p.inequalities().all(|c| c.body().eval_point(x) < 0.0);
    if eqs == 0 {
        return (0..samples).all(|_| inequalities_hold(&uniform_in(b, rng)));
    }
    let mid = b.midpoint().expect("bounded box");
    subsets(p.dim(), eqs).into_iter().any(|deps| {
        (0..samples).all(|_| {
            let mut x = uniform_in(b, rng);
            for &j in &deps {
                x[j] = mid[j];
            }
            polish_dependents(p, &deps, x)
                .is_some_and(|x| b.contains_point(&x) && residual(p, &x) < 1e-10 && inequalities_hold(&x))
        })
    })
}

/// A point of the disks solution set with `(v1, v2)` on a 2^-10 grid in the
/// lens, so `v3` and `v4` are computed exactly.
pub fn disks_solution(rng: &mut impl Rng) -> [f64; 4] {
    loop {
        let v1 = rng.gen_range(0..=1024) as f64 / 1024.0;
        let v2 = rng.gen_range(-1024..=1024) as f64 / 1024.0;
        let v3 = v1 * v1 + v2 * v2;
        let v4 = (v1 - 1.0) * (v1 - 1.0) + v2 * v2;
        if v3 <= 1.0 && v4 <= 1.0 {
            return [v1, v2, v3, v4];
        }
    }
}

/// Fraction of depth-histogram mass in the heaviest window spanning half the
/// depth range.
pub fn half_range_mass(per_depth: &std::collections::BTreeMap<u32, u64>) -> f64 {
    let (Some((&lo, _)), Some((&hi, _))) = (per_depth.first_key_value(), per_depth.last_key_value()) else {
        return 0.0;
    };
    let window = ((hi - lo + 1) as f64 / 2.0).floor().max(1.0) as u32;
    let total: u64 = per_depth.values().sum();
    let best = (lo..=hi + 1 - window)
        .map(|start| per_depth.range(start..start + window).map(|(_, &c)| c).sum::<u64>())
        .max()
        .unwrap_or(0);
    best as f64 / total as f64
}
pub mod rigor;
