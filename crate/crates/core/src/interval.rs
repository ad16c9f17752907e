//! Closed floating-point intervals and boxes with outward rounding.
//!
//! Every endpoint is computed in round-to-nearest and then corrected with an
//! error-free transformation (TwoSum, exact product residuals) so that the exact real
//! result of the operation is always enclosed. When the residual proves the
//! nearest result exact, no widening happens, so integer arithmetic stays
//! tight. Nothing here touches the FPU rounding mode.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("operation undefined on an empty interval")]
    Empty,
    #[error("component {index} is too narrow to bisect")]
    Unsplittable { index: usize },
    #[error("component {index} is unbounded")]
    Unbounded { index: usize },
    #[error("component index {index} out of range for a box of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

// Below this magnitude product residuals of products may be inexact (subnormal
// range), so endpoints are widened unconditionally.
const TINY: f64 = 1e-290;

/// `x * y + z` for the residual patterns below, where the exact result is
/// representable. `None` when the operands are outside the range where the
/// split-based product is error-free.
#[inline]
fn residual(x: f64, y: f64, z: f64) -> Option<f64> {
    if cfg!(target_feature = "fma") {
        return Some(x.mul_add(y, z));
    }
    const SAFE_LO: f64 = 1e-250;
    const SAFE_HI: f64 = 1e290;
    let (ax, ay) = (x.abs(), y.abs());
    if !(SAFE_LO..=SAFE_HI).contains(&ax) || !(SAFE_LO..=SAFE_HI).contains(&ay) {
        return None;
    }
    // Dekker's product: p + e == x * y exactly.
    const SPLIT: f64 = 134_217_729.0;
    let split = |a: f64| {
        let c = SPLIT * a;
        let hi = c - (c - a);
        (hi, a - hi)
    };
    let p = x * y;
    let (xh, xl) = split(x);
    let (yh, yl) = split(y);
    let e = ((xh * yh - p) + xh * yl + xl * yh) + xl * yl;
    Some((p + z) + e)
}

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        if a.is_finite() && b.is_finite() && s > 0.0 {
            return f64::MAX;
        }
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    -add_down(-a, -b)
}

#[inline]
pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// Product rounded toward -inf, with the interval convention 0 * inf = 0.
#[inline]
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        if a.is_finite() && b.is_finite() && p > 0.0 {
            return f64::MAX;
        }
        return p;
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    if residual(a, b, -p).is_none_or(|r| r < 0.0) {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    -mul_down(-a, b)
}

/// Quotient rounded toward -inf. `b` must be nonzero; a finite numerator over
/// an infinite denominator yields 0 (the limit value).
#[inline]
pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    debug_assert!(b != 0.0);
    if a == 0.0 {
        return 0.0;
    }
    if b.is_infinite() {
        debug_assert!(a.is_finite());
        return 0.0;
    }
    let q = a / b;
    if q.is_infinite() {
        if a.is_finite() && q > 0.0 {
            return f64::MAX;
        }
        return q;
    }
    if q.abs() < TINY || b.abs() < TINY {
        return q.next_down();
    }
    // a = q*b + r exactly; sign of the true correction r/b decides rounding.
    let Some(r) = residual(-q, b, a) else {
        return q.next_down();
    };
    let corr_negative = (r < 0.0) != (b < 0.0) && r != 0.0;
    if corr_negative {
        q.next_down()
    } else {
        q
    }
}

#[inline]
pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    -div_down(-a, b)
}

#[inline]
fn sqrt_down(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 || x.is_infinite() {
        return x;
    }
    let s = x.sqrt();
    if x < TINY {
        return s.next_down().max(0.0);
    }
    // x - s^2 is exactly representable.
    if residual(-s, s, x).is_none_or(|r| r < 0.0) {
        s.next_down()
    } else {
        s
    }
}

#[inline]
fn sqrt_up(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 || x.is_infinite() {
        return x;
    }
    let s = x.sqrt();
    if x < TINY {
        return s.next_up();
    }
    if residual(-s, s, x).is_none_or(|r| r > 0.0) {
        s.next_up()
    } else {
        s
    }
}

fn pow_nonneg_down(x: f64, k: u32) -> f64 {
    debug_assert!(x >= 0.0);
    let mut r = x;
    for _ in 1..k {
        r = mul_down(r, x);
    }
    r
}

fn pow_nonneg_up(x: f64, k: u32) -> f64 {
    debug_assert!(x >= 0.0);
    let mut r = x;
    for _ in 1..k {
        r = mul_up(r, x);
    }
    r
}

/// Largest float `r >= 0` with `r^k <= x` (rigorously), `x >= 0`.
fn root_nonneg_down(x: f64, k: u32) -> f64 {
    if k == 2 {
        return sqrt_down(x);
    }
    if x == 0.0 || x.is_infinite() {
        return x;
    }
    let ok = |r: f64| pow_nonneg_up(r, k) <= x;
    let mut r = x.powf(1.0 / k as f64);
    for _ in 0..4 {
        if ok(r) {
            return r;
        }
        r = r.next_down();
    }
    // Near underflow the rounded powers are coarse; bisect on the bit patterns,
    // keeping `lo` valid.
    let (mut lo, mut hi) = (0u64, r.to_bits());
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(f64::from_bits(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    f64::from_bits(lo)
}

/// Smallest float `r >= 0` with `r^k >= x` (rigorously), `x >= 0`.
fn root_nonneg_up(x: f64, k: u32) -> f64 {
    if k == 2 {
        return sqrt_up(x);
    }
    if x == 0.0 || x.is_infinite() {
        return x;
    }
    let ok = |r: f64| pow_nonneg_down(r, k) >= x;
    let mut r = x.powf(1.0 / k as f64);
    for _ in 0..4 {
        if ok(r) {
            return r;
        }
        r = r.next_up();
    }
    // `max(x, 1)` is a valid bound: its k-th power is at least x.
    let mut hi = x.max(1.0).to_bits();
    let mut lo = r.to_bits().min(hi);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(f64::from_bits(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    f64::from_bits(hi)
}

/// A closed interval `[lo, hi]` of reals with `f64` endpoints, or the empty set.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const EMPTY: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
    };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    /// Panics unless `lo <= hi`, neither is NaN and the interval contains a real.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self::try_new(lo, hi).unwrap_or_else(|| panic!("invalid interval [{lo}, {hi}]"))
    }

    pub fn try_new(lo: f64, hi: f64) -> Option<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return None;
        }
        // Normalise -0.0 so that bitwise comparisons of pavings are stable.
        Some(Interval {
            lo: lo + 0.0,
            hi: hi + 0.0,
        })
    }

    #[inline]
    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    // Internal constructor for endpoint pairs produced by rounded arithmetic.
    #[inline]
    fn from_bounds(lo: f64, hi: f64) -> Self {
        if lo > hi || lo.is_nan() || hi.is_nan() {
            return Self::EMPTY;
        }
        Interval {
            lo: lo + 0.0,
            hi: hi + 0.0,
        }
    }

    /// Tightest interval enclosing the real number written as a decimal literal.
    ///
    /// Literals that are exactly representable give a degenerate interval;
    /// others (like `0.1`) give the two floats adjacent to the exact value.
    pub fn from_decimal(text: &str) -> Option<Self> {
        let x: f64 = text.trim().parse().ok()?;
        if !x.is_finite() {
            return None;
        }
        if decimal_is_exact(text.trim(), x) {
            return Some(Self::point(x));
        }
        Some(Self::from_bounds(x.next_down(), x.next_up()))
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        !self.is_empty() && self.lo.is_finite() && self.hi.is_finite()
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    /// `self ⊆ other`. The empty set is a subset of everything.
    #[inline]
    pub fn subset_of(&self, other: &Interval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    /// `self` lies in the topological interior of `other`.
    #[inline]
    pub fn interior_of(&self, other: &Interval) -> bool {
        if self.is_empty() {
            return true;
        }
        let lo_ok = other.lo < self.lo || (other.lo == f64::NEG_INFINITY && self.lo == f64::NEG_INFINITY);
        let hi_ok = self.hi < other.hi || (other.hi == f64::INFINITY && self.hi == f64::INFINITY);
        lo_ok && hi_ok
    }

    /// Width `hi - lo` rounded up; `None` for the empty interval.
    #[inline]
    pub fn width(&self) -> Option<f64> {
        if self.is_empty() {
            None
        } else {
            Some(sub_up(self.hi, self.lo))
        }
    }

    /// A finite point inside the interval (the midpoint for bounded ones).
    #[inline]
    pub fn midpoint(&self) -> Option<f64> {
        if self.is_empty() {
            return None;
        }
        let (lo, hi) = (self.lo, self.hi);
        Some(match (lo.is_finite(), hi.is_finite()) {
            (true, true) => {
                let m = 0.5 * lo + 0.5 * hi;
                m.clamp(lo, hi)
            }
            (false, false) => 0.0,
            (false, true) => {
                if hi > 0.0 {
                    0.0
                } else {
                    -f64::MAX.min(-(2.0 * hi - 1.0))
                }
            }
            (true, false) => {
                if lo < 0.0 {
                    0.0
                } else {
                    f64::MAX.min(2.0 * lo + 1.0)
                }
            }
        })
    }

    /// Smallest absolute value over the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Largest absolute value over the interval.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    #[inline]
    pub fn intersect(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Self::EMPTY;
        }
        Self::from_bounds(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    #[inline]
    pub fn hull(&self, other: &Interval) -> Interval {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Self::from_bounds(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    #[inline]
    pub fn add(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Self::EMPTY;
        }
        Self::from_bounds(add_down(self.lo, other.lo), add_up(self.hi, other.hi))
    }

    #[inline]
    pub fn sub(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Self::EMPTY;
        }
        Self::from_bounds(sub_down(self.lo, other.hi), sub_up(self.hi, other.lo))
    }

    #[inline]
    pub fn neg(&self) -> Interval {
        if self.is_empty() {
            return Self::EMPTY;
        }
        Self::from_bounds(-self.hi, -self.lo)
    }

    #[inline]
    pub fn mul(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Self::EMPTY;
        }
        let (a1, a2, b1, b2) = (self.lo, self.hi, other.lo, other.hi);
        // Sign cases; only the straddling pair needs four products.
        let (lo, hi) = if a1 >= 0.0 {
            if b1 >= 0.0 {
                (mul_down(a1, b1), mul_up(a2, b2))
            } else if b2 <= 0.0 {
                (mul_down(a2, b1), mul_up(a1, b2))
            } else {
                (mul_down(a2, b1), mul_up(a2, b2))
            }
        } else if a2 <= 0.0 {
            if b1 >= 0.0 {
                (mul_down(a1, b2), mul_up(a2, b1))
            } else if b2 <= 0.0 {
                (mul_down(a2, b2), mul_up(a1, b1))
            } else {
                (mul_down(a1, b2), mul_up(a1, b1))
            }
        } else if b1 >= 0.0 {
            (mul_down(a1, b2), mul_up(a2, b2))
        } else if b2 <= 0.0 {
            (mul_down(a2, b1), mul_up(a1, b1))
        } else {
            (
                mul_down(a1, b2).min(mul_down(a2, b1)),
                mul_up(a1, b1).max(mul_up(a2, b2)),
            )
        };
        Self::from_bounds(lo, hi)
    }

    /// Product with the point `k`; equal to `self.mul(&Interval::point(k))`.
    #[inline]
    pub fn scale(&self, k: f64) -> Interval {
        if self.is_empty() || k.is_nan() {
            return Self::EMPTY;
        }
        if k >= 0.0 {
            Self::from_bounds(mul_down(self.lo, k), mul_up(self.hi, k))
        } else {
            Self::from_bounds(mul_down(self.hi, k), mul_up(self.lo, k))
        }
    }

    /// Set quotient `{x / y : x ∈ self, y ∈ other, y ≠ 0}` hulled into one interval.
    ///
    /// Division by `[0, 0]` is empty; a divisor straddling zero gives the
    /// unbounded hull.
    #[inline]
    pub fn div(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Self::EMPTY;
        }
        let (x, y) = (self, other);
        if y.lo == 0.0 && y.hi == 0.0 {
            return Self::EMPTY;
        }
        if y.lo > 0.0 {
            if x.lo >= 0.0 {
                Self::from_bounds(div_down(x.lo, y.hi), div_up(x.hi, y.lo))
            } else if x.hi <= 0.0 {
                Self::from_bounds(div_down(x.lo, y.lo), div_up(x.hi, y.hi))
            } else {
                Self::from_bounds(div_down(x.lo, y.lo), div_up(x.hi, y.lo))
            }
        } else if y.hi < 0.0 {
            if x.lo >= 0.0 {
                Self::from_bounds(div_down(x.hi, y.hi), div_up(x.lo, y.lo))
            } else if x.hi <= 0.0 {
                Self::from_bounds(div_down(x.hi, y.lo), div_up(x.lo, y.hi))
            } else {
                Self::from_bounds(div_down(x.hi, y.hi), div_up(x.lo, y.hi))
            }
        } else if x.contains_zero() || (y.lo < 0.0 && y.hi > 0.0) {
            Self::ENTIRE
        } else if y.lo == 0.0 {
            // y = [0, d], d > 0
            if x.lo > 0.0 {
                Self::from_bounds(div_down(x.lo, y.hi), f64::INFINITY)
            } else {
                Self::from_bounds(f64::NEG_INFINITY, div_up(x.hi, y.hi))
            }
        } else {
            // y = [c, 0], c < 0
            if x.lo > 0.0 {
                Self::from_bounds(f64::NEG_INFINITY, div_up(x.lo, y.lo))
            } else {
                Self::from_bounds(div_down(x.hi, y.lo), f64::INFINITY)
            }
        }
    }

    /// Relational division: hull of `{x : x * y ∈ self for some y ∈ divisor}`.
    ///
    /// Differs from [`Interval::div`] when both contain zero (any `x` works).
    #[inline]
    pub fn div_relational(&self, divisor: &Interval) -> Interval {
        if self.is_empty() || divisor.is_empty() {
            return Self::EMPTY;
        }
        if self.contains_zero() && divisor.contains_zero() {
            return Self::ENTIRE;
        }
        self.div(divisor)
    }

    #[inline]
    pub fn sqr(&self) -> Interval {
        self.powi(2)
    }

    /// Image of `x ↦ x^k`, not repeated multiplication.
    pub fn powi(&self, k: u32) -> Interval {
        if self.is_empty() {
            return Self::EMPTY;
        }
        match k {
            0 => return Self::point(1.0),
            1 => return *self,
            _ => {}
        }
        let (lo, hi) = (self.lo, self.hi);
        if k.is_multiple_of(2) {
            if lo >= 0.0 {
                Self::from_bounds(pow_nonneg_down(lo, k), pow_nonneg_up(hi, k))
            } else if hi <= 0.0 {
                Self::from_bounds(pow_nonneg_down(-hi, k), pow_nonneg_up(-lo, k))
            } else {
                Self::from_bounds(0.0, pow_nonneg_up(self.mag(), k))
            }
        } else {
            let down = |x: f64| {
                if x >= 0.0 {
                    pow_nonneg_down(x, k)
                } else {
                    -pow_nonneg_up(-x, k)
                }
            };
            let up = |x: f64| {
                if x >= 0.0 {
                    pow_nonneg_up(x, k)
                } else {
                    -pow_nonneg_down(-x, k)
                }
            };
            Self::from_bounds(down(lo), up(hi))
        }
    }

    /// Hull of the real `k`-th roots of `self`, i.e. `{x : x^k ∈ self}`.
    pub fn root_preimage(&self, k: u32) -> Interval {
        if self.is_empty() {
            return Self::EMPTY;
        }
        match k {
            0 => {
                return if self.contains(1.0) { Self::ENTIRE } else { Self::EMPTY };
            }
            1 => return *self,
            _ => {}
        }
        if k.is_multiple_of(2) {
            let pos = self.intersect(&Interval::from_bounds(0.0, f64::INFINITY));
            if pos.is_empty() {
                return Self::EMPTY;
            }
            let r = root_nonneg_up(pos.hi, k);
            Self::from_bounds(-r, r)
        } else {
            let down = |x: f64| {
                if x >= 0.0 {
                    root_nonneg_down(x, k)
                } else {
                    -root_nonneg_up(-x, k)
                }
            };
            let up = |x: f64| {
                if x >= 0.0 {
                    root_nonneg_up(x, k)
                } else {
                    -root_nonneg_down(-x, k)
                }
            };
            Self::from_bounds(down(self.lo), up(self.hi))
        }
    }

    /// Preimage of `x ↦ x^k` restricted to `within`, hulled.
    ///
    /// For even `k` the positive and negative branches are intersected with
    /// `within` separately before hulling.
    pub fn pow_preimage_within(&self, k: u32, within: &Interval) -> Interval {
        if k % 2 == 1 || k < 2 {
            return self.root_preimage(k).intersect(within);
        }
        let pos = self.intersect(&Interval::from_bounds(0.0, f64::INFINITY));
        if pos.is_empty() {
            return Self::EMPTY;
        }
        let r = Interval::from_bounds(root_nonneg_down(pos.lo, k), root_nonneg_up(pos.hi, k));
        let positive = r.intersect(within);
        let negative = r.neg().intersect(within);
        positive.hull(&negative)
    }

    /// Square root of the nonnegative part; empty when entirely negative.
    pub fn sqrt(&self) -> Interval {
        let x = self.intersect(&Interval::from_bounds(0.0, f64::INFINITY));
        if x.is_empty() {
            return Self::EMPTY;
        }
        Self::from_bounds(sqrt_down(x.lo), sqrt_up(x.hi))
    }
}

fn fmt_endpoint(x: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&x.abs()) {
        write!(f, "{x}")
    } else {
        write!(f, "{x:e}")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "[empty]");
        }
        write!(f, "[")?;
        fmt_endpoint(self.lo, f)?;
        write!(f, ",")?;
        fmt_endpoint(self.hi, f)?;
        write!(f, "]")
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Whether the decimal literal denotes exactly the float `x`.
/// A decimal literal whose value is exactly `x`: the shortest round-trip
/// form when that is exact, the full expansion otherwise.
pub(crate) fn exact_literal(x: f64) -> String {
    let short = format!("{x:?}");
    if !x.is_finite() || decimal_is_exact(&short, x) {
        return short;
    }
    let full = format!("{x:.1100}");
    full.trim_end_matches('0').to_string()
}

fn decimal_is_exact(text: &str, x: f64) -> bool {
    let Some(lit) = normalize_decimal(text) else {
        return false;
    };
    // Any f64 has a terminating decimal expansion of at most 1074 fractional digits.
    let exact = format!("{:.1100}", x);
    normalize_decimal(&exact).is_some_and(|e| e == lit)
}

/// Canonical plain-decimal form: optional '-', integer digits without leading
/// zeros, optional '.' and fractional digits without trailing zeros.
fn normalize_decimal(text: &str) -> Option<String> {
    let (neg, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    if digits.is_empty() {
        return None;
    }
    // value = digits * 10^(exp - frac_len)
    let point = int_part.len() as i64 + exp;
    if point.abs() > 5000 {
        return None;
    }
    let (int_digits, frac_digits) = if point <= 0 {
        (String::new(), format!("{}{}", "0".repeat((-point) as usize), digits))
    } else if point as usize >= digits.len() {
        (format!("{}{}", digits, "0".repeat(point as usize - digits.len())), String::new())
    } else {
        (digits[..point as usize].to_string(), digits[point as usize..].to_string())
    };
    let int_digits = int_digits.trim_start_matches('0');
    let frac_digits = frac_digits.trim_end_matches('0');
    let int_digits = if int_digits.is_empty() { "0" } else { int_digits };
    let is_zero = int_digits == "0" && frac_digits.is_empty();
    let mut out = String::new();
    if neg && !is_zero {
        out.push('-');
    }
    out.push_str(int_digits);
    if !frac_digits.is_empty() {
        out.push('.');
        out.push_str(frac_digits);
    }
    Some(out)
}

/// A vector of intervals. A box with any empty component is the empty box,
/// normalised so that every component is empty.
#[derive(Clone, PartialEq)]
pub struct IntervalBox {
    comps: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(comps: Vec<Interval>) -> Self {
        let mut b = IntervalBox { comps };
        b.normalize();
        b
    }

    pub fn empty(dim: usize) -> Self {
        IntervalBox {
            comps: vec![Interval::EMPTY; dim],
        }
    }

    #[inline]
    pub fn from_bounds(bounds: &[(f64, f64)]) -> Self {
        Self::new(bounds.iter().map(|&(lo, hi)| Interval::new(lo, hi)).collect())
    }

    fn normalize(&mut self) {
        if self.comps.iter().any(Interval::is_empty) {
            self.set_empty();
        }
    }

    pub fn set_empty(&mut self) {
        self.comps.iter_mut().for_each(|c| *c = Interval::EMPTY);
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.comps.first().is_some_and(Interval::is_empty)
    }

    pub fn components(&self) -> &[Interval] {
        &self.comps
    }

    #[inline]
    pub fn get(&self, i: usize) -> Interval {
        self.comps[i]
    }

    /// Replaces component `i`; an empty value empties the whole box.
    pub fn set(&mut self, i: usize, value: Interval) {
        if value.is_empty() {
            self.set_empty();
        } else {
            self.comps[i] = value;
        }
    }

    /// Intersects component `i` with `value`. Returns false if the box became empty.
    pub fn narrow(&mut self, i: usize, value: &Interval) -> bool {
        let v = self.comps[i].intersect(value);
        self.set(i, v);
        !v.is_empty()
    }

    #[inline]
    pub fn intersect(&self, other: &IntervalBox) -> IntervalBox {
        assert_eq!(self.dim(), other.dim());
        IntervalBox::new(self.comps.iter().zip(&other.comps).map(|(a, b)| a.intersect(b)).collect())
    }

    #[inline]
    pub fn subset_of(&self, other: &IntervalBox) -> bool {
        self.is_empty() || self.comps.iter().zip(&other.comps).all(|(a, b)| a.subset_of(b))
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.comps.iter().zip(x).all(|(c, &v)| c.contains(v))
    }

    /// Maximum component width; `None` for the empty box. A 0-dimensional box has width 0.
    #[inline]
    pub fn width(&self) -> Option<f64> {
        if self.is_empty() {
            return None;
        }
        Some(self.comps.iter().filter_map(Interval::width).fold(0.0, f64::max))
    }

    #[inline]
    pub fn midpoint(&self) -> Option<Vec<f64>> {
        self.comps.iter().map(Interval::midpoint).collect()
    }

    /// Whether component `i` can be split at an interior float.
    pub fn is_bisectable(&self, i: usize) -> bool {
        self.split_point(i).is_ok()
    }

    fn split_point(&self, i: usize) -> Result<f64, IntervalError> {
        let c = *self.comps.get(i).ok_or(IntervalError::IndexOutOfRange { index: i, dim: self.dim() })?;
        if c.is_empty() {
            return Err(IntervalError::Empty);
        }
        if !c.is_bounded() {
            return Err(IntervalError::Unbounded { index: i });
        }
        if c.lo.next_up() >= c.hi {
            return Err(IntervalError::Unsplittable { index: i });
        }
        let m = 0.5 * c.lo + 0.5 * c.hi;
        if !(c.lo < m && m < c.hi) {
            return Err(IntervalError::Unsplittable { index: i });
        }
        Ok(m)
    }

    /// Splits component `i` at its midpoint into a lower and an upper half.
    pub fn bisect(&self, i: usize) -> Result<(IntervalBox, IntervalBox), IntervalError> {
        let m = self.split_point(i)?;
        let c = self.comps[i];
        let mut left = self.clone();
        let mut right = self.clone();
        left.comps[i] = Interval::from_bounds(c.lo, m);
        right.comps[i] = Interval::from_bounds(m, c.hi);
        Ok((left, right))
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, "\t")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.comps).finish()
    }
}

impl FromIterator<Interval> for IntervalBox {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        IntervalBox::new(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi)
    }

    #[test]
    fn exact_integer_sums_stay_tight() {
        assert_eq!(iv(1.0, 2.0).add(&iv(3.0, 4.0)), iv(4.0, 6.0));
        assert_eq!(iv(1.0, 2.0).sub(&iv(3.0, 4.0)), iv(-3.0, -1.0));
    }

    #[test]
    fn inexact_sum_encloses_three_tenths() {
        let s = Interval::point(0.1).add(&Interval::point(0.2));
        assert!(s.lo() < s.hi());
        // 0.1 + 0.2 rounds to 0.30000000000000004 which exceeds 3/10
        assert!(s.lo() <= 0.3 && s.hi() >= 0.30000000000000004);
        assert!(s.hi().next_down().next_down() <= s.lo());
    }

    #[test]
    fn roots_of_subnormals_terminate() {
        let tiny = f64::from_bits(1);
        let r = iv(-tiny, tiny).root_preimage(3);
        assert!(r.contains(0.0) && r.hi() > 0.0);
        assert!(pow_nonneg_down(r.hi(), 3) >= tiny);
        let d = root_nonneg_down(tiny, 5);
        assert!(pow_nonneg_up(d, 5) <= tiny);
    }

    #[test]
    fn empty_is_absorbing() {
        assert!(Interval::EMPTY.add(&iv(0.0, 1.0)).is_empty());
        assert!(iv(0.0, 1.0).mul(&Interval::EMPTY).is_empty());
        assert!(Interval::EMPTY.sqrt().is_empty());
    }

    #[test]
    fn products_and_powers() {
        assert_eq!(iv(-1.0, 2.0).mul(&iv(3.0, 4.0)), iv(-4.0, 8.0));
        assert_eq!(iv(-2.0, 1.0).sqr(), iv(0.0, 4.0));
        assert_eq!(iv(-2.0, 1.0).mul(&iv(-2.0, 1.0)), iv(-2.0, 4.0));
        assert_eq!(iv(-2.0, 1.0).powi(3), iv(-8.0, 1.0));
        assert_eq!(iv(-3.0, -2.0).powi(4), iv(16.0, 81.0));
        assert_eq!(iv(0.0, f64::INFINITY).mul(&iv(0.0, 1.0)), iv(0.0, f64::INFINITY));
    }

    #[test]
    fn extended_division() {
        assert_eq!(iv(1.0, 1.0).div(&iv(0.0, 2.0)), iv(0.5, f64::INFINITY));
        assert_eq!(iv(1.0, 1.0).div(&iv(-2.0, 0.0)), iv(f64::NEG_INFINITY, -0.5));
        assert_eq!(iv(-1.0, -1.0).div(&iv(0.0, 2.0)), iv(f64::NEG_INFINITY, -0.5));
        assert_eq!(iv(1.0, 2.0).div(&iv(-1.0, 1.0)), Interval::ENTIRE);
        assert!(iv(1.0, 2.0).div(&Interval::ZERO).is_empty());
        assert_eq!(iv(-1.0, 1.0).div(&iv(0.0, 1.0)), Interval::ENTIRE);
        assert_eq!(iv(6.0, 8.0).div(&iv(2.0, 4.0)), iv(1.5, 4.0));
        assert_eq!(iv(0.0, 0.0).div_relational(&Interval::ZERO), Interval::ENTIRE);
    }

    #[test]
    fn sqrt_cases() {
        assert_eq!(iv(4.0, 9.0).sqrt(), iv(2.0, 3.0));
        assert_eq!(iv(-4.0, 9.0).sqrt(), iv(0.0, 3.0));
        assert!(iv(-4.0, -1.0).sqrt().is_empty());
        let two = iv(2.0, 2.0).sqrt();
        assert!(two.lo() < two.hi());
        assert!(two.lo() * two.lo() <= 2.0);
    }

    #[test]
    fn root_preimages() {
        let r = iv(4.0, 4.0).pow_preimage_within(2, &iv(0.0, 10.0));
        assert_eq!(r, iv(2.0, 2.0));
        let r = iv(4.0, 9.0).pow_preimage_within(2, &iv(-10.0, 10.0));
        assert_eq!(r, iv(-3.0, 3.0));
        let r = iv(4.0, 9.0).pow_preimage_within(2, &iv(-2.5, 1.0));
        assert_eq!(r, iv(-2.5, -2.0));
        let r = iv(-8.0, 27.0).root_preimage(3);
        assert!(r.lo() <= -2.0 && r.hi() >= 3.0 && r.width().unwrap() < 5.0 + 1e-12);
        let r = iv(2.0, 2.0).pow_preimage_within(4, &Interval::ENTIRE);
        let q = 2f64.powf(0.25);
        assert!(r.contains(q) && r.contains(-q));
    }

    #[test]
    fn intersect_cases() {
        assert_eq!(iv(0.0, 2.0).intersect(&iv(1.0, 3.0)), iv(1.0, 2.0));
        assert!(iv(0.0, 1.0).intersect(&iv(2.0, 3.0)).is_empty());
        let a = iv(-0.5, 7.25);
        assert_eq!(a.intersect(&a), a);
    }

    #[test]
    fn widths() {
        assert_eq!(iv(1.0, 3.0).width(), Some(2.0));
        assert_eq!(iv(3.0, 3.0).width(), Some(0.0));
        assert_eq!(Interval::EMPTY.width(), None);
        let b = IntervalBox::from_bounds(&[(0.0, 1.0), (0.0, 4.0)]);
        assert_eq!(b.width(), Some(4.0));
        assert_eq!(IntervalBox::empty(2).width(), None);
    }

    #[test]
    fn bisection() {
        let b = IntervalBox::from_bounds(&[(0.0, 4.0)]);
        let (l, r) = b.bisect(0).unwrap();
        assert_eq!(l, IntervalBox::from_bounds(&[(0.0, 2.0)]));
        assert_eq!(r, IntervalBox::from_bounds(&[(2.0, 4.0)]));

        let b = IntervalBox::from_bounds(&[(0.0, 1.0), (-2.0, 2.0)]);
        let (l, r) = b.bisect(1).unwrap();
        assert_eq!(l, IntervalBox::from_bounds(&[(0.0, 1.0), (-2.0, 0.0)]));
        assert_eq!(r, IntervalBox::from_bounds(&[(0.0, 1.0), (0.0, 2.0)]));
    }

    #[test]
    fn one_ulp_component_is_unsplittable() {
        let hi = 1.0f64;
        let lo = hi.next_down();
        let c = iv(lo, hi);
        let m = c.midpoint().unwrap();
        assert!(m == lo || m == hi);
        let b = IntervalBox::new(vec![c]);
        assert_eq!(b.bisect(0), Err(IntervalError::Unsplittable { index: 0 }));
        let b = IntervalBox::from_bounds(&[(0.0, f64::INFINITY)]);
        assert_eq!(b.bisect(0), Err(IntervalError::Unbounded { index: 0 }));
        let b = IntervalBox::from_bounds(&[(2.0, 2.0)]);
        assert!(b.bisect(0).is_err());
    }

    #[test]
    fn empty_box_normalises() {
        let b = IntervalBox::new(vec![iv(0.0, 1.0), Interval::EMPTY]);
        assert!(b.is_empty());
        assert!(b.get(0).is_empty());
        let mut b = IntervalBox::from_bounds(&[(0.0, 1.0), (0.0, 1.0)]);
        assert!(!b.narrow(1, &iv(2.0, 3.0)));
        assert!(b.is_empty());
    }

    #[test]
    fn decimal_literals() {
        assert_eq!(Interval::from_decimal("5"), Some(Interval::point(5.0)));
        assert_eq!(Interval::from_decimal("0.5"), Some(Interval::point(0.5)));
        assert_eq!(Interval::from_decimal("2.5e-1"), Some(Interval::point(0.25)));
        assert_eq!(Interval::from_decimal("-1.25"), Some(Interval::point(-1.25)));
        let tenth = Interval::from_decimal("0.1").unwrap();
        assert!(tenth.lo() < tenth.hi());
        assert!(tenth.contains(0.1));
        assert_eq!(tenth.lo().next_up().next_up(), tenth.hi());
        assert!(Interval::from_decimal("1e-8").unwrap().contains(1e-8));
        assert!(Interval::from_decimal("abc").is_none());
    }

    #[test]
    fn display_round_trips() {
        assert_eq!(iv(1.0, 2.5).to_string(), "[1,2.5]");
        assert_eq!(iv(-1e-300, 1e20).to_string(), "[-1e-300,1e20]");
        let x = 0.1f64 + 0.2;
        let s = Interval::point(x).to_string();
        let inner = &s[1..s.len() - 1];
        let parts: Vec<f64> = inner.split(',').map(|p| p.parse().unwrap()).collect();
        assert_eq!(parts, vec![x, x]);
    }

    #[test]
    fn interior() {
        assert!(iv(1.0, 2.0).interior_of(&iv(0.0, 3.0)));
        assert!(!iv(0.0, 2.0).interior_of(&iv(0.0, 3.0)));
        assert!(iv(1.0, f64::INFINITY).interior_of(&iv(0.0, f64::INFINITY)));
    }
}
