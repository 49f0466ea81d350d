//! Pairwise visibility predicates and the incremental sweeps built on them.
//!
//! Natural visibility is decided by the sign of
//! `(y_c - y_a) * (t_b - t_a) - (y_b - y_a) * (t_c - t_a)`, computed exactly:
//! a floating-point estimate settles almost every case, and the rest (near
//! ties, overflow, underflow) are redone in big-integer arithmetic. The
//! comparison is strict, so collinear intermediates block.

use num_bigint::BigInt;

use crate::series::Point;

/// Index distance as a float. Falls back to `i128` when the `i64` difference overflows.
#[inline]
fn span(from: i64, to: i64) -> f64 {
    match to.checked_sub(from) {
        Some(d) => (d as f64).abs(),
        None => (i128::from(to) - i128::from(from)).unsigned_abs() as f64,
    }
}

/// Relative error allowed on the floating-point estimate before it is trusted.
const REL_ERR: f64 = 4.0 * f64::EPSILON;
/// Absolute slack covering underflow in the products.
const ABS_ERR: f64 = f64::MIN_POSITIVE;

/// True when `c` lies strictly below the segment from `anchor` to `p`.
/// `c` must lie between them in time; either side of the anchor works.
#[inline]
fn below_segment(anchor: Point, p: Point, c: Point) -> bool {
    let lhs = (c.value - anchor.value) * span(anchor.index, p.index);
    let rhs = (p.value - anchor.value) * span(anchor.index, c.index);
    let gap = rhs - lhs;
    // false for NaN, so overflow also takes the careful path
    if gap.abs() > REL_ERR * (lhs.abs() + rhs.abs()) + ABS_ERR {
        return gap > 0.0;
    }
    below_segment_careful(anchor, p, c)
}

#[cold]
#[inline(never)]
fn below_segment_careful(anchor: Point, p: Point, c: Point) -> bool {
    // a float difference is zero or negative exactly when the real one is
    let (sc, sp) = (sign(c.value - anchor.value), sign(p.value - anchor.value));
    if sc != sp || sc == 0 {
        return sc < sp;
    }
    exact::below_segment(anchor, p, c)
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Largest magnitude below which every integral double is exact in `i64`.
const INT_LIMIT: f64 = 9_007_199_254_740_992.0;

mod exact {
    use super::{BigInt, Point};

    /// Finite `x` as `(m, e)` with `x = m * 2^e`.
    fn decompose(x: f64) -> (i64, i32) {
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & ((1 << 52) - 1)) as i64;
        let (m, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | 1 << 52, exp - 1075)
        };
        (if x.is_sign_negative() { -m } else { m }, e)
    }

    fn distance(from: i64, to: i64) -> BigInt {
        BigInt::from((i128::from(to) - i128::from(from)).abs())
    }

    fn integral(x: f64) -> Option<i128> {
        (x.fract() == 0.0 && x.abs() < super::INT_LIMIT).then_some(x as i128)
    }

    fn distance_i128(from: i64, to: i64) -> i128 {
        (i128::from(to) - i128::from(from)).abs()
    }

    pub(super) fn below_segment(anchor: Point, p: Point, c: Point) -> bool {
        if let (Some(ya), Some(yp), Some(yc)) =
            (integral(anchor.value), integral(p.value), integral(c.value))
        {
            // |difference| < 2^54 and distance < 2^64, so products fit
            return (yc - ya) * distance_i128(anchor.index, p.index)
                < (yp - ya) * distance_i128(anchor.index, c.index);
        }
        let parts = [anchor.value, p.value, c.value].map(decompose);
        let base = parts.iter().map(|&(_, e)| e).min().expect("three values");
        let [ya, yp, yc] = parts.map(|(m, e)| BigInt::from(m) << (e - base) as usize);
        (yc - &ya) * distance(anchor.index, p.index) < (yp - ya) * distance(anchor.index, c.index)
    }
}

/// True when `c` lies strictly below the chord from `a` to `b`.
#[inline]
pub fn below_chord(a: Point, b: Point, c: Point) -> bool {
    below_segment(a, b, c)
}

/// Natural visibility between `a` and `b` given the points strictly between them.
pub fn visible_nv(a: Point, b: Point, between: &[Point]) -> bool {
    between.iter().all(|&c| below_chord(a, b, c))
}

/// Horizontal visibility: every intermediate value strictly below both endpoints.
pub fn visible_hv(a: Point, b: Point, between: &[Point]) -> bool {
    let floor = a.value.min(b.value);
    between.iter().all(|c| c.value < floor)
}

/// Natural-visibility sweep away from a fixed anchor.
///
/// Feed points in order of increasing distance from the anchor (either
/// direction). Each call reports whether the new point is visible from the
/// anchor given every point fed before it. Only the last visible point is
/// kept: it carries the steepest slope seen so far, so one comparison
/// replaces a scan over all intermediates.
#[derive(Debug, Clone)]
pub struct NaturalSweep {
    anchor: Point,
    horizon: Option<Point>,
}

impl NaturalSweep {
    pub fn new(anchor: Point) -> Self {
        Self {
            anchor,
            horizon: None,
        }
    }

    pub fn observe(&mut self, p: Point) -> bool {
        let visible = match self.horizon {
            None => true,
            Some(c) => below_segment(self.anchor, p, c),
        };
        if visible {
            self.horizon = Some(p);
        }
        visible
    }

    /// Records `p` as visible without evaluating it, for points already known
    /// to be visible by other means.
    pub fn accept(&mut self, p: Point) {
        self.horizon = Some(p);
    }
}

/// Horizontal-visibility sweep away from a fixed anchor.
#[derive(Debug, Clone)]
pub struct HorizontalSweep {
    anchor_value: f64,
    running_max: f64,
}

impl HorizontalSweep {
    pub fn new(anchor_value: f64) -> Self {
        Self {
            anchor_value,
            running_max: f64::NEG_INFINITY,
        }
    }

    pub fn observe(&mut self, value: f64) -> bool {
        let visible = self.running_max < value.min(self.anchor_value);
        if value > self.running_max {
            self.running_max = value;
        }
        visible
    }

    /// Nothing further from the anchor can be seen once a point at least as
    /// tall as the anchor has been passed.
    pub fn exhausted(&self) -> bool {
        self.running_max >= self.anchor_value
    }
}
