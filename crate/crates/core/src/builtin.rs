//! Builtin benchmark problems.

use std::str::FromStr;

use thiserror::Error;

use crate::expr::{Constraint, Expr, Problem};
use crate::interval::{Interval, IntervalBox};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("unknown builtin problem `{0}` (expected eco[N], disks or sphere-plane[N])")]
    Unknown(String),
    #[error("bad size for `{name}`: {size} (must be at least {min})")]
    BadSize { name: String, size: usize, min: usize },
}

/// Names and sizes of the builtin problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Economics modelling system with `k` variables.
    Eco(usize),
    /// Intersection of two disks in the plane, with two slack variables.
    Disks,
    /// Unit sphere cut by the hyperplane `Σ x_i = 0` in dimension `d`.
    SpherePlane(usize),
}

impl Builtin {
    pub fn problem(self) -> Problem {
        match self {
            Builtin::Eco(k) => eco(k),
            Builtin::Disks => disks(),
            Builtin::SpherePlane(d) => sphere_plane(d),
        }
    }

    pub fn name(self) -> String {
        match self {
            Builtin::Eco(k) => format!("eco{k}"),
            Builtin::Disks => "disks".into(),
            Builtin::SpherePlane(d) => format!("sphere-plane{d}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = BuiltinError;

    /// Accepts `eco`, `eco8`, `eco:8`, `eco(8)`, `disks`, `sphere-plane3`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (name, rest) = s.split_at(split);
        let name = name.trim_end_matches([':', '(']);
        let rest = rest.trim_end_matches(')');
        let size = if rest.is_empty() {
            None
        } else {
            Some(rest.parse::<usize>().map_err(|_| BuiltinError::Unknown(s.into()))?)
        };
        let check = |size: usize, min: usize| {
            if size < min {
                Err(BuiltinError::BadSize { name: name.into(), size, min })
            } else {
                Ok(size)
            }
        };
        match (name, size) {
            ("eco", size) => Ok(Builtin::Eco(check(size.unwrap_or(8), 2)?)),
            ("disks", None) => Ok(Builtin::Disks),
            ("sphere-plane" | "sp", size) => Ok(Builtin::SpherePlane(check(size.unwrap_or(3), 2)?)),
            _ => Err(BuiltinError::Unknown(s.into())),
        }
    }
}

/// The `k`-variable economics system:
///
/// `(x_j + Σ_{i=1}^{k-1-j} x_i x_{i+j}) x_k - j = 0` for `j = 1..k-1` and
/// `Σ_{i=1}^{k-1} x_i + 1 = 0`, all variables in `[-100, 100]`.
pub fn eco(k: usize) -> Problem {
    assert!(k >= 2);
    let x = |i: usize| Expr::var(i - 1);
    let mut constraints = Vec::with_capacity(k);
    for j in 1..k {
        let mut inner = x(j);
        for i in 1..k - j {
            inner = inner + x(i) * x(i + j);
        }
        constraints.push(Constraint::eq_zero(inner * x(k) - j as f64));
    }
    let mut sum = x(1);
    for i in 2..k {
        sum = sum + x(i);
    }
    constraints.push(Constraint::eq_zero(sum + 1.0));
    let domain = IntervalBox::new(vec![Interval::new(-100.0, 100.0); k]);
    Problem::with_default_names(domain, constraints).expect("valid eco problem")
}

/// Two disks `v1² + v2² ≤ 1` and `(v1-1)² + v2² ≤ 1` encoded with slack
/// variables `v3, v4 ∈ [0, 1]`.
pub fn disks() -> Problem {
    let v = |i: usize| Expr::var(i - 1);
    let constraints = vec![
        Constraint::eq_zero(v(1).pow(2) + v(2).pow(2) - v(3)),
        Constraint::eq_zero((v(1) - 1.0).pow(2) + v(2).pow(2) - v(4)),
    ];
    let domain = IntervalBox::from_bounds(&[(-1.0, 1.0), (-1.0, 1.0), (0.0, 1.0), (0.0, 1.0)]);
    let names = (1..=4).map(|i| format!("v{i}")).collect();
    Problem::new(names, domain, constraints).expect("valid disks problem")
}

/// `Σ x_i² - 1 = 0` and `Σ x_i = 0` on `[-1, 1]^d`.
pub fn sphere_plane(d: usize) -> Problem {
    assert!(d >= 2);
    let x = Expr::var;
    let mut sphere = x(0).pow(2);
    let mut plane = x(0);
    for i in 1..d {
        sphere = sphere + x(i).pow(2);
        plane = plane + x(i);
    }
    let constraints = vec![Constraint::eq_zero(sphere - 1.0), Constraint::eq_zero(plane)];
    let domain = IntervalBox::new(vec![Interval::new(-1.0, 1.0); d]);
    Problem::with_default_names(domain, constraints).expect("valid sphere-plane problem")
}
