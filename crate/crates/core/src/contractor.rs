//! The prune step: constraint propagation to a fixed point, interval Newton
//! contraction with existence/uniqueness certification, and inner-box
//! verification for under-constrained systems.

use crate::expr::{hc4_revise, Problem};
use crate::interval::{Interval, IntervalBox};

/// A propagation round that shrinks no component by more than this fraction
/// of its width ends the HC4 fixed-point loop.
pub const PROPAGATION_RATIO: f64 = 0.1;

/// Maximum Newton sweeps per call.
pub const NEWTON_MAX_SWEEPS: usize = 10;

/// Newton iteration stops once a sweep improves no width by more than this fraction.
pub const NEWTON_MIN_IMPROVEMENT: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// The box holds no solution.
    EmptyProof,
    /// Inequalities hold strictly on the box and, for under-constrained
    /// systems, every parameter value extends to a solution inside it.
    InnerVerified,
    /// The box holds exactly one solution of the square system.
    UniqueSolution,
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PruneOutcome {
    pub boxed: IntervalBox,
    pub certificate: Certificate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewtonCertificate {
    Empty,
    Unique,
    Unknown,
}

fn relative_shrink(before: &Interval, after: &Interval) -> f64 {
    let (Some(wb), Some(wa)) = (before.width(), after.width()) else {
        return 1.0;
    };
    if wb == f64::INFINITY {
        return if wa < f64::INFINITY { 1.0 } else { 0.0 };
    }
    if wb == 0.0 {
        return 0.0;
    }
    (wb - wa) / wb
}

fn max_shrink(before: &IntervalBox, after: &IntervalBox) -> f64 {
    before
        .components()
        .iter()
        .zip(after.components())
        .map(|(b, a)| relative_shrink(b, a))
        .fold(0.0, f64::max)
}

/// Applies HC4Revise for every constraint in turn until a full round shrinks
/// no component by more than [`PROPAGATION_RATIO`], or the box empties.
pub fn hc4_fixed_point(p: &Problem, b: &IntervalBox) -> IntervalBox {
    let mut current = b.clone();
    if current.is_empty() || p.constraints().is_empty() {
        return current;
    }
    // Each continuing round shrinks some width by 10%, so this cap is only hit
    // on pathological inputs.
    for _ in 0..10_000 {
        let before = current.clone();
        for c in p.constraints() {
            current = hc4_revise(c, &current);
            if current.is_empty() {
                return current;
            }
        }
        if max_shrink(&before, &current) <= PROPAGATION_RATIO {
            break;
        }
    }
    current
}

/// Inverse of a square matrix by Gauss-Jordan elimination with partial
/// pivoting, or `None` when it is numerically singular.
pub(crate) fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale = m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if !scale.is_finite() || scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[pivot_row][col].abs() <= scale * 1e-14 {
            return None;
        }
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = a[col][col];
        for j in 0..n {
            a[col][j] /= pivot;
            inv[col][j] /= pivot;
        }
        for r in 0..n {
            if r != col {
                let factor = a[r][col];
                if factor != 0.0 {
                    for j in 0..n {
                        a[r][j] -= factor * a[col][j];
                        inv[r][j] -= factor * inv[col][j];
                    }
                }
            }
        }
    }
    if inv.iter().flatten().all(|x| x.is_finite()) {
        Some(inv)
    } else {
        None
    }
}

/// One preconditioned interval Newton (Gauss-Seidel) step on the square
/// system formed by the problem's equations and the variables `active`.
///
/// All other components of `b` are parameters held at their interval values,
/// so a `Unique` certificate means: for every parameter value in the box the
/// system has exactly one solution in the active components of the result.
pub fn newton_step(p: &Problem, active: &[usize], b: &IntervalBox) -> (IntervalBox, NewtonCertificate) {
    let k = active.len();
    assert_eq!(k, p.equation_count(), "Newton needs a square system");
    if b.is_empty() {
        return (b.clone(), NewtonCertificate::Empty);
    }
    if k == 0 || active.iter().any(|&j| !b.get(j).is_bounded()) {
        return (b.clone(), NewtonCertificate::Unknown);
    }
    let mid: Vec<f64> = active.iter().map(|&j| b.get(j).midpoint().unwrap()).collect();
    let mut at_mid = b.clone();
    for (&j, &m) in active.iter().zip(&mid) {
        at_mid.set(j, Interval::point(m));
    }
    let f = p.equation_values(&at_mid);
    if f.iter().any(Interval::is_empty) {
        // Some equation is undefined at the midpoint for every parameter;
        // nothing rigorous to say about the rest of the box.
        return (b.clone(), NewtonCertificate::Unknown);
    }
    let jac = p.jacobian_columns(b, active);
    let jac_mid: Vec<Vec<f64>> = jac
        .iter()
        .map(|row| row.iter().map(|e| e.midpoint().unwrap_or(0.0)).collect())
        .collect();
    let Some(y) = invert(&jac_mid) else {
        return (b.clone(), NewtonCertificate::Unknown);
    };

    // Preconditioned system A (x - m) = -r with A = Y J, r = Y F(m).
    let mut a = vec![vec![Interval::ZERO; k]; k];
    let mut r = vec![Interval::ZERO; k];
    for i in 0..k {
        for l in 0..k {
            let yil = y[i][l];
            if yil == 0.0 {
                continue;
            }
            r[i] = r[i].add(&f[l].scale(yil));
            for j in 0..k {
                if jac[l][j] != Interval::ZERO {
                    a[i][j] = a[i][j].add(&jac[l][j].scale(yil));
                }
            }
        }
    }

    let offsets: Vec<Interval> = active
        .iter()
        .zip(&mid)
        .map(|(&j, &m)| b.get(j).sub(&Interval::point(m)))
        .collect();

    // Jacobi images (no updates) decide uniqueness; Gauss-Seidel images contract.
    let mut unique = true;
    let mut out = b.clone();
    let mut updated = offsets.clone();
    for i in 0..k {
        let xi = b.get(active[i]);
        let m = Interval::point(mid[i]);

        let mut jacobi_sum = r[i];
        let mut gs_sum = r[i];
        for j in 0..k {
            if j != i {
                jacobi_sum = jacobi_sum.add(&a[i][j].mul(&offsets[j]));
                gs_sum = gs_sum.add(&a[i][j].mul(&updated[j]));
            }
        }
        let jacobi = m.add(&jacobi_sum.neg().div_relational(&a[i][i]));
        if unique && !jacobi.interior_of(&xi) {
            unique = false;
        }
        let gs = m.add(&gs_sum.neg().div_relational(&a[i][i]));
        let narrowed = xi.intersect(&gs).intersect(&jacobi);
        if narrowed.is_empty() {
            return (IntervalBox::empty(b.dim()), NewtonCertificate::Empty);
        }
        out.set(active[i], narrowed);
        updated[i] = narrowed.sub(&m);
    }
    let cert = if unique {
        NewtonCertificate::Unique
    } else {
        NewtonCertificate::Unknown
    };
    (out, cert)
}

/// Iterated Newton: at most [`NEWTON_MAX_SWEEPS`] steps, stopping on a
/// certificate or when a sweep improves no width by more than
/// [`NEWTON_MIN_IMPROVEMENT`].
pub fn interval_newton(p: &Problem, active: &[usize], b: &IntervalBox) -> (IntervalBox, NewtonCertificate) {
    let mut current = b.clone();
    for _ in 0..NEWTON_MAX_SWEEPS {
        let (next, cert) = newton_step(p, active, &current);
        if cert != NewtonCertificate::Unknown {
            return (next, cert);
        }
        let improvement = max_shrink(&current, &next);
        current = next;
        if improvement < NEWTON_MIN_IMPROVEMENT {
            break;
        }
    }
    (current, NewtonCertificate::Unknown)
}

fn inequalities_hold_strictly(p: &Problem, b: &IntervalBox) -> bool {
    p.inequalities().all(|c| c.certainly_holds(b))
}

/// Picks `n_f` dependent variables by complete pivoting on the midpoint
/// Jacobian scaled by component widths. `banned_first` excludes a column
/// from the first pivot choice.
fn select_dependents(p: &Problem, b: &IntervalBox, banned_first: Option<usize>) -> Option<Vec<usize>> {
    let nf = p.equation_count();
    let n = p.dim();
    let jac = p.jacobian(b);
    let mut m: Vec<Vec<f64>> = jac
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, e)| {
                    let w = b.get(j).width().unwrap_or(0.0);
                    if !w.is_finite() {
                        return 0.0;
                    }
                    e.midpoint().unwrap_or(0.0) * w
                })
                .collect()
        })
        .collect();
    let mut rows_left: Vec<usize> = (0..nf).collect();
    let mut cols_left: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::with_capacity(nf);
    for step in 0..nf {
        let mut best: Option<(usize, usize, f64)> = None;
        for &i in &rows_left {
            for &j in &cols_left {
                if step == 0 && Some(j) == banned_first {
                    continue;
                }
                let v = m[i][j].abs();
                if v.is_finite() && best.is_none_or(|(_, _, bv)| v > bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let (pi, pj, pv) = best?;
        if pv == 0.0 {
            return None;
        }
        chosen.push(pj);
        rows_left.retain(|&i| i != pi);
        cols_left.retain(|&j| j != pj);
        let pivot = m[pi][pj];
        let pivot_row = m[pi].clone();
        for &i in &rows_left {
            let factor = m[i][pj] / pivot;
            for &j in &cols_left {
                m[i][j] -= factor * pivot_row[j];
            }
        }
    }
    chosen.sort_unstable();
    Some(chosen)
}

/// Checks whether `b` is an inner box.
///
/// Inequalities must hold strictly on `b`. Problems without equations need
/// nothing more. Under-constrained problems additionally need a parametric
/// Newton certificate on a selected set of dependent variables, proving
/// that every value of the remaining variables extends to a solution in
/// `b`. Well-constrained or over-constrained problems with equations never
/// have inner boxes.
pub fn inner_test(p: &Problem, b: &IntervalBox) -> bool {
    inner_test_within(p, b, b)
}

/// Like [`inner_test`] for a box `b` obtained by sound contraction of
/// `outer`: the dependent variables may be sought in a neighbourhood of
/// `b` inside `outer`, since every solution of `outer` lies in `b`.
pub(crate) fn inner_test_within(p: &Problem, b: &IntervalBox, outer: &IntervalBox) -> bool {
    if b.is_empty() || !inequalities_hold_strictly(p, b) {
        return false;
    }
    if p.equation_count() == 0 {
        return true;
    }
    if !p.is_under_constrained() {
        return false;
    }
    let first = select_dependents(p, b, None);
    let grown = inflate_within(b, outer);
    let alternative = first.as_ref().and_then(|cols| select_dependents(p, b, cols.first().copied()));
    for cols in first.iter().chain(alternative.iter()) {
        let mut test_box = b.clone();
        for &j in cols {
            test_box.set(j, grown.get(j));
        }
        if test_box != *b && !inequalities_hold_strictly(p, &test_box) {
            continue;
        }
        if interval_newton(p, cols, &test_box).1 == NewtonCertificate::Unique {
            return true;
        }
    }
    false
}

/// Grows every component of `b` by its own width plus a small absolute
/// margin on each side, clipped to `outer` (which must contain `b`).
fn inflate_within(b: &IntervalBox, outer: &IntervalBox) -> IntervalBox {
    b.components()
        .iter()
        .zip(outer.components())
        .map(|(c, o)| {
            let w = c.width().unwrap_or(0.0);
            let margin = w + 1e-10 * (1.0 + c.mag());
            match Interval::try_new(c.lo() - margin, c.hi() + margin) {
                Some(g) if g.is_bounded() => g.intersect(o).hull(c),
                _ => *c,
            }
        })
        .collect()
}

/// Contracts `b` and classifies the result.
///
/// Propagation runs first; an emptied box is an [`Certificate::EmptyProof`].
/// Well-constrained systems then get interval Newton on all variables, and
/// a uniqueness proof (with strictly satisfied inequalities) yields
/// [`Certificate::UniqueSolution`]. Otherwise the inner-box test decides
/// between [`Certificate::InnerVerified`] and [`Certificate::Undecided`].
pub fn prune(p: &Problem, b: &IntervalBox) -> PruneOutcome {
    let outcome = |boxed: IntervalBox, certificate| PruneOutcome { boxed, certificate };
    if b.is_empty() {
        return outcome(b.clone(), Certificate::EmptyProof);
    }
    let contracted = hc4_fixed_point(p, b);
    if contracted.is_empty() {
        return outcome(contracted, Certificate::EmptyProof);
    }
    if p.is_well_constrained() && p.equation_count() > 0 {
        // Certification runs on a neighbourhood of the contracted box inside
        // `b`; every solution in `b` already lies in `contracted`.
        let all: Vec<usize> = (0..p.dim()).collect();
        let (newton_box, cert) = interval_newton(p, &all, &inflate_within(&contracted, b));
        let newton_box = newton_box.intersect(&contracted);
        if newton_box.is_empty() {
            return outcome(newton_box, Certificate::EmptyProof);
        }
        return match cert {
            NewtonCertificate::Empty => outcome(newton_box, Certificate::EmptyProof),
            NewtonCertificate::Unique if inequalities_hold_strictly(p, &newton_box) => {
                outcome(newton_box, Certificate::UniqueSolution)
            }
            _ => outcome(newton_box, Certificate::Undecided),
        };
    }
    if inner_test_within(p, &contracted, b) {
        return outcome(contracted, Certificate::InnerVerified);
    }
    outcome(contracted, Certificate::Undecided)
}
