//! Constraint expressions, their natural interval extension and the
//! forward-backward projection (HC4Revise) used by the contractor.

use std::cell::RefCell;
use std::fmt;
use std::ops;

use thiserror::Error;

use crate::interval::{exact_literal, Interval, IntervalBox};

/// Expression tree over problem variables.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(usize),
    /// A constant known to lie in the interval (degenerate for exact literals).
    Const(Interval),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Integer power with exponent >= 2.
    Pow(Box<Expr>, u32),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn constant(x: f64) -> Expr {
        Expr::Const(Interval::point(x))
    }

    pub fn pow(self, k: u32) -> Expr {
        match k {
            0 => Expr::constant(1.0),
            1 => self,
            _ => Expr::Pow(Box::new(self), k),
        }
    }

    pub fn sqrt(self) -> Expr {
        Expr::Sqrt(Box::new(self))
    }

    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Const(_) => None,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.max_var().max(b.max_var()),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sqrt(a) => a.max_var(),
        }
    }

    pub fn depends_on(&self, var: usize) -> bool {
        match self {
            Expr::Var(i) => *i == var,
            Expr::Const(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on(var) || b.depends_on(var)
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sqrt(a) => a.depends_on(var),
        }
    }

    fn as_const(&self) -> Option<Interval> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_exactly(&self, x: f64) -> bool {
        self.as_const().is_some_and(|c| c.is_point() && c.lo() == x)
    }

    /// Natural interval extension on `b`.
    pub fn eval(&self, b: &IntervalBox) -> Interval {
        match self {
            Expr::Var(i) => b.get(*i),
            Expr::Const(c) => *c,
            Expr::Add(x, y) => x.eval(b).add(&y.eval(b)),
            Expr::Sub(x, y) => x.eval(b).sub(&y.eval(b)),
            Expr::Mul(x, y) => x.eval(b).mul(&y.eval(b)),
            Expr::Div(x, y) => x.eval(b).div(&y.eval(b)),
            Expr::Neg(x) => x.eval(b).neg(),
            Expr::Pow(x, k) => x.eval(b).powi(*k),
            Expr::Sqrt(x) => x.eval(b).sqrt(),
        }
    }

    /// Plain floating-point evaluation (midpoints of constants).
    pub fn eval_point(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Var(i) => x[*i],
            Expr::Const(c) => c.midpoint().unwrap_or(f64::NAN),
            Expr::Add(a, b) => a.eval_point(x) + b.eval_point(x),
            Expr::Sub(a, b) => a.eval_point(x) - b.eval_point(x),
            Expr::Mul(a, b) => a.eval_point(x) * b.eval_point(x),
            Expr::Div(a, b) => a.eval_point(x) / b.eval_point(x),
            Expr::Neg(a) => -a.eval_point(x),
            Expr::Pow(a, k) => a.eval_point(x).powi(*k as i32),
            Expr::Sqrt(a) => a.eval_point(x).sqrt(),
        }
    }

    /// Symbolic partial derivative with respect to variable `var`.
    pub fn partial_deriv(&self, var: usize) -> Expr {
        match self {
            Expr::Var(i) => Expr::constant(if *i == var { 1.0 } else { 0.0 }),
            Expr::Const(_) => Expr::constant(0.0),
            Expr::Add(a, b) => s_add(a.partial_deriv(var), b.partial_deriv(var)),
            Expr::Sub(a, b) => s_sub(a.partial_deriv(var), b.partial_deriv(var)),
            Expr::Mul(a, b) => s_add(
                s_mul(a.partial_deriv(var), (**b).clone()),
                s_mul((**a).clone(), b.partial_deriv(var)),
            ),
            Expr::Div(a, b) => {
                let da = a.partial_deriv(var);
                let db = b.partial_deriv(var);
                if db.is_exactly(0.0) {
                    s_div(da, (**b).clone())
                } else {
                    s_div(
                        s_sub(s_mul(da, (**b).clone()), s_mul((**a).clone(), db)),
                        (**b).clone().pow(2),
                    )
                }
            }
            Expr::Neg(a) => s_neg(a.partial_deriv(var)),
            Expr::Pow(a, k) => {
                let da = a.partial_deriv(var);
                if da.is_exactly(0.0) {
                    return da;
                }
                s_mul(s_mul(Expr::constant(*k as f64), (**a).clone().pow(k - 1)), da)
            }
            Expr::Sqrt(a) => {
                let da = a.partial_deriv(var);
                if da.is_exactly(0.0) {
                    return da;
                }
                s_div(da, s_mul(Expr::constant(2.0), self.clone()))
            }
        }
    }

    /// Formats with variable names taken from `names`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        ExprDisplay { expr: self, names }
    }
}

fn s_add(a: Expr, b: Expr) -> Expr {
    if a.is_exactly(0.0) {
        b
    } else if b.is_exactly(0.0) {
        a
    } else {
        Expr::Add(Box::new(a), Box::new(b))
    }
}

fn s_sub(a: Expr, b: Expr) -> Expr {
    if b.is_exactly(0.0) {
        a
    } else if a.is_exactly(0.0) {
        s_neg(b)
    } else {
        Expr::Sub(Box::new(a), Box::new(b))
    }
}

fn s_mul(a: Expr, b: Expr) -> Expr {
    if a.is_exactly(0.0) || b.is_exactly(0.0) {
        Expr::constant(0.0)
    } else if a.is_exactly(1.0) {
        b
    } else if b.is_exactly(1.0) {
        a
    } else if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
        Expr::Const(x.mul(&y))
    } else {
        Expr::Mul(Box::new(a), Box::new(b))
    }
}

fn s_div(a: Expr, b: Expr) -> Expr {
    if a.is_exactly(0.0) {
        Expr::constant(0.0)
    } else if b.is_exactly(1.0) {
        a
    } else {
        Expr::Div(Box::new(a), Box::new(b))
    }
}

fn s_neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(c.neg()),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl ops::$tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
        impl ops::$tr<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::$variant(Box::new(self), Box::new(Expr::constant(rhs)))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

struct ExprDisplay<'a> {
    expr: &'a Expr,
    names: &'a [String],
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Var(_) | Expr::Sqrt(_) => 5,
        Expr::Const(c) => {
            if c.midpoint().unwrap_or(0.0) < 0.0 {
                3
            } else {
                5
            }
        }
    }
}

impl ExprDisplay<'_> {
    fn write(&self, e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |sub: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if precedence(sub) < min_prec {
                write!(f, "(")?;
                self.write(sub, f)?;
                write!(f, ")")
            } else {
                self.write(sub, f)
            }
        };
        match e {
            Expr::Var(i) => match self.names.get(*i) {
                Some(name) => write!(f, "{name}"),
                None => write!(f, "x{i}"),
            },
            // The midpoint of a literal's enclosure is the float nearest to the
            // literal, so printing it reproduces the same enclosure when reparsed.
            Expr::Const(c) => write!(f, "{:?}", c.midpoint().unwrap_or(f64::NAN)),
            Expr::Add(a, b) => {
                child(a, 1, f)?;
                write!(f, " + ")?;
                child(b, 2, f)
            }
            Expr::Sub(a, b) => {
                child(a, 1, f)?;
                write!(f, " - ")?;
                child(b, 2, f)
            }
            Expr::Mul(a, b) => {
                child(a, 2, f)?;
                write!(f, " * ")?;
                child(b, 3, f)
            }
            Expr::Div(a, b) => {
                child(a, 2, f)?;
                write!(f, " / ")?;
                child(b, 3, f)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                child(a, 4, f)
            }
            Expr::Pow(a, k) => {
                child(a, 5, f)?;
                write!(f, "^{k}")
            }
            Expr::Sqrt(a) => {
                write!(f, "sqrt(")?;
                self.write(a, f)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.expr, f)
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Var(usize),
    Const(Interval),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Neg(usize),
    Pow(usize, u32),
    Sqrt(usize),
}

thread_local! {
    // Node values of the tape being evaluated; neither `eval` nor `revise` re-enters.
    static SCRATCH: RefCell<Vec<Interval>> = const { RefCell::new(Vec::new()) };
}

/// Postorder linearisation of an expression tree; the root is the last node.
/// Every node except the root has exactly one parent.
#[derive(Clone, Debug)]
pub(crate) struct Tape {
    ops: Vec<Op>,
}

impl Tape {
    pub(crate) fn compile(e: &Expr) -> Tape {
        let mut ops = Vec::new();
        fn go(e: &Expr, ops: &mut Vec<Op>) -> usize {
            let op = match e {
                Expr::Var(i) => Op::Var(*i),
                Expr::Const(c) => Op::Const(*c),
                Expr::Add(a, b) => Op::Add(go(a, ops), go(b, ops)),
                Expr::Sub(a, b) => Op::Sub(go(a, ops), go(b, ops)),
                Expr::Mul(a, b) => Op::Mul(go(a, ops), go(b, ops)),
                Expr::Div(a, b) => Op::Div(go(a, ops), go(b, ops)),
                Expr::Neg(a) => Op::Neg(go(a, ops)),
                Expr::Pow(a, k) => Op::Pow(go(a, ops), *k),
                Expr::Sqrt(a) => Op::Sqrt(go(a, ops)),
            };
            ops.push(op);
            ops.len() - 1
        }
        go(e, &mut ops);
        Tape { ops }
    }

    fn forward(&self, b: &IntervalBox, vals: &mut Vec<Interval>) {
        vals.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => b.get(i),
                Op::Const(c) => c,
                Op::Add(x, y) => vals[x].add(&vals[y]),
                Op::Sub(x, y) => vals[x].sub(&vals[y]),
                Op::Mul(x, y) => vals[x].mul(&vals[y]),
                Op::Div(x, y) => vals[x].div(&vals[y]),
                Op::Neg(x) => vals[x].neg(),
                Op::Pow(x, k) => vals[x].powi(k),
                Op::Sqrt(x) => vals[x].sqrt(),
            };
            vals.push(v);
        }
    }

    pub(crate) fn eval(&self, b: &IntervalBox) -> Interval {
        SCRATCH.with(|vals| {
            let mut vals = vals.borrow_mut();
            self.forward(b, &mut vals);
            vals.last().copied().unwrap_or(Interval::EMPTY)
        })
    }

    /// Contracts `b` in place so that the root value lies in `target`.
    /// Returns false when `b` was proven to hold no point satisfying it.
    pub(crate) fn revise(&self, b: &mut IntervalBox, target: &Interval) -> bool {
        if b.is_empty() {
            return false;
        }
        SCRATCH.with(|vals| self.revise_with(b, target, &mut vals.borrow_mut()))
    }

    fn revise_with(&self, b: &mut IntervalBox, target: &Interval, vals: &mut Vec<Interval>) -> bool {
        self.forward(b, vals);
        let root = self.ops.len() - 1;
        vals[root] = vals[root].intersect(target);
        for i in (0..self.ops.len()).rev() {
            let z = vals[i];
            if z.is_empty() {
                b.set_empty();
                return false;
            }
            match self.ops[i] {
                Op::Var(v) => {
                    if !b.narrow(v, &z) {
                        return false;
                    }
                }
                Op::Const(_) => {}
                Op::Add(x, y) => {
                    vals[x] = vals[x].intersect(&z.sub(&vals[y]));
                    vals[y] = vals[y].intersect(&z.sub(&vals[x]));
                }
                Op::Sub(x, y) => {
                    vals[x] = vals[x].intersect(&z.add(&vals[y]));
                    vals[y] = vals[y].intersect(&vals[x].sub(&z));
                }
                Op::Mul(x, y) => {
                    vals[x] = vals[x].intersect(&z.div_relational(&vals[y]));
                    vals[y] = vals[y].intersect(&z.div_relational(&vals[x]));
                }
                Op::Div(x, y) => {
                    vals[x] = vals[x].intersect(&z.mul(&vals[y]));
                    vals[y] = vals[y].intersect(&vals[x].div_relational(&z));
                }
                Op::Neg(x) => {
                    vals[x] = vals[x].intersect(&z.neg());
                }
                Op::Pow(x, k) => {
                    vals[x] = z.pow_preimage_within(k, &vals[x]);
                }
                Op::Sqrt(x) => {
                    let nonneg = z.intersect(&Interval::new(0.0, f64::INFINITY));
                    vals[x] = vals[x].intersect(&nonneg.sqr());
                }
            }
        }
        true
    }
}

/// Relation of a constraint body to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `body = 0`
    EqZero,
    /// `body < 0`
    LtZero,
}

impl Relation {
    /// The set the body is projected onto. Strict inequalities are closed here;
    /// strictness is only enforced by the inner-box test.
    pub fn target(self) -> Interval {
        match self {
            Relation::EqZero => Interval::ZERO,
            Relation::LtZero => Interval::new(f64::NEG_INFINITY, 0.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Constraint {
    body: Expr,
    relation: Relation,
    tape: Tape,
}

impl Constraint {
    pub fn new(body: Expr, relation: Relation) -> Self {
        let tape = Tape::compile(&body);
        Constraint { body, relation, tape }
    }

    pub fn eq_zero(body: Expr) -> Self {
        Self::new(body, Relation::EqZero)
    }

    pub fn lt_zero(body: Expr) -> Self {
        Self::new(body, Relation::LtZero)
    }

    pub fn body(&self) -> &Expr {
        &self.body
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn is_equation(&self) -> bool {
        self.relation == Relation::EqZero
    }

    pub fn eval(&self, b: &IntervalBox) -> Interval {
        self.tape.eval(b)
    }

    /// Whether every point of `b` satisfies the constraint (strictly for `<`).
    pub fn certainly_holds(&self, b: &IntervalBox) -> bool {
        let v = self.eval(b);
        match self.relation {
            Relation::EqZero => v.is_point() && v.lo() == 0.0,
            Relation::LtZero => !v.is_empty() && v.hi() < 0.0,
        }
    }
}

impl PartialEq for Constraint {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body && self.relation == other.relation
    }
}

/// Forward-backward projection of one constraint onto the box.
///
/// Every point of `b` satisfying `c` is kept; the empty box is returned when
/// the projection proves there is none.
pub fn hc4_revise(c: &Constraint, b: &IntervalBox) -> IntervalBox {
    let mut out = b.clone();
    c.tape.revise(&mut out, &c.relation.target());
    out
}

/// Interval Jacobian of `equations` on `b`, one row per equation.
pub fn jacobian(equations: &[Expr], b: &IntervalBox) -> Vec<Vec<Interval>> {
    equations
        .iter()
        .map(|f| (0..b.dim()).map(|j| f.partial_deriv(j).eval(b)).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("{names} variable names for a domain of dimension {dim}")]
    NameCount { names: usize, dim: usize },
    #[error("constraint {index} refers to variable {var} but the problem has {dim} variables")]
    UnknownVariable { index: usize, var: usize, dim: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
}

/// A numerical constraint satisfaction problem: variables, initial domain and
/// a conjunction of equations `f = 0` and strict inequalities `g < 0`.
#[derive(Clone, Debug)]
pub struct Problem {
    names: Vec<String>,
    domain: IntervalBox,
    constraints: Vec<Constraint>,
    equations: Vec<usize>,
    // derivatives[row][col] = d equations[row] / d x_col
    derivatives: Vec<Vec<Tape>>,
    derivative_exprs: Vec<Vec<Expr>>,
}

impl Problem {
    pub fn new(names: Vec<String>, domain: IntervalBox, constraints: Vec<Constraint>) -> Result<Self, ProblemError> {
        let dim = domain.dim();
        if names.len() != dim {
            return Err(ProblemError::NameCount { names: names.len(), dim });
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(ProblemError::DuplicateName(a.clone()));
            }
        }
        for (index, c) in constraints.iter().enumerate() {
            if let Some(var) = c.body.max_var() {
                if var >= dim {
                    return Err(ProblemError::UnknownVariable { index, var, dim });
                }
            }
        }
        let equations: Vec<usize> = constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_equation())
            .map(|(i, _)| i)
            .collect();
        let derivative_exprs: Vec<Vec<Expr>> = equations
            .iter()
            .map(|&i| (0..dim).map(|j| constraints[i].body.partial_deriv(j)).collect())
            .collect();
        let derivatives = derivative_exprs
            .iter()
            .map(|row| row.iter().map(Tape::compile).collect())
            .collect();
        Ok(Problem {
            names,
            domain,
            constraints,
            equations,
            derivatives,
            derivative_exprs,
        })
    }

    /// Convenience constructor naming variables `x1..xn`.
    pub fn with_default_names(domain: IntervalBox, constraints: Vec<Constraint>) -> Result<Self, ProblemError> {
        let names = (1..=domain.dim()).map(|i| format!("x{i}")).collect();
        Self::new(names, domain, constraints)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn domain(&self) -> &IntervalBox {
        &self.domain
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn equation_count(&self) -> usize {
        self.equations.len()
    }

    pub fn inequality_count(&self) -> usize {
        self.constraints.len() - self.equations.len()
    }

    pub fn is_well_constrained(&self) -> bool {
        self.dim() == self.equation_count()
    }

    pub fn is_under_constrained(&self) -> bool {
        self.dim() > self.equation_count()
    }

    pub fn equations(&self) -> impl Iterator<Item = &Constraint> {
        self.equations.iter().map(|&i| &self.constraints[i])
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| !c.is_equation())
    }

    /// Symbolic derivative of equation `row` with respect to variable `col`.
    pub fn derivative(&self, row: usize, col: usize) -> &Expr {
        &self.derivative_exprs[row][col]
    }

    /// Interval Jacobian of the equations over `b` (rows: equations, columns: variables).
    pub fn jacobian(&self, b: &IntervalBox) -> Vec<Vec<Interval>> {
        self.derivatives
            .iter()
            .map(|row| row.iter().map(|t| t.eval(b)).collect())
            .collect()
    }

    /// Interval Jacobian restricted to the given columns.
    pub(crate) fn jacobian_columns(&self, b: &IntervalBox, cols: &[usize]) -> Vec<Vec<Interval>> {
        self.derivatives
            .iter()
            .map(|row| cols.iter().map(|&j| row[j].eval(b)).collect())
            .collect()
    }

    /// Interval values of the equation bodies over `b`.
    pub(crate) fn equation_values(&self, b: &IntervalBox) -> Vec<Interval> {
        self.equations().map(|c| c.eval(b)).collect()
    }
}

impl fmt::Display for Problem {
    /// Renders the problem in the textual problem-file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, d) in self.names.iter().zip(self.domain.components()) {
            writeln!(f, "var {name} in [{}, {}];", exact_literal(d.lo()), exact_literal(d.hi()))?;
        }
        for c in &self.constraints {
            let op = match c.relation {
                Relation::EqZero => "=",
                Relation::LtZero => "<",
            };
            writeln!(f, "con {} {op} 0;", c.body.display(&self.names))?;
        }
        Ok(())
    }
}
