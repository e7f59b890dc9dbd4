//! Slopes of directions on a square-tiled surface.
//!
//! The slope of a holonomy vector `(x, y)` is `x/y`, so horizontal
//! directions have slope `inf` and vertical directions have slope `0`.
//! Slopes double as boundary points of the upper half plane.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

pub type Rat = num_rational::Rational64;

/// A slope stored as a primitive integer pair `(x, y)` with `y >= 0`,
/// `gcd(x, y) = 1`, and `(1, 0)` for the point at infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slope {
    pub x: i64,
    pub y: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { x: 1, y: 0 };
    pub const ZERO: Slope = Slope { x: 0, y: 1 };

    /// Slope of a nonzero integer vector.
    pub fn of_vector(x: i64, y: i64) -> Slope {
        assert!(x != 0 || y != 0, "zero vector has no slope");
        let g = x.gcd(&y);
        let (mut x, mut y) = (x / g, y / g);
        if y < 0 || (y == 0 && x < 0) {
            x = -x;
            y = -y;
        }
        Slope { x, y }
    }

    pub fn of_rat(r: Rat) -> Slope {
        Slope::of_vector(*r.numer(), *r.denom())
    }

    pub fn is_infinite(&self) -> bool {
        self.y == 0
    }

    pub fn value(&self) -> Option<Rat> {
        if self.is_infinite() {
            None
        } else {
            Some(Rat::new(self.x, self.y))
        }
    }

    /// The primitive direction vector representing this slope
    /// (determined up to sign; this is the canonical representative).
    pub fn primitive(&self) -> (i64, i64) {
        (self.x, self.y)
    }
}

/// Total order: finite slopes by value, `inf` greater than everything.
impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            // x1/y1 vs x2/y2 with y > 0: compare x1*y2 vs x2*y1.
            (false, false) => (self.x as i128 * other.y as i128)
                .cmp(&(other.x as i128 * self.y as i128)),
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if self.y == 1 {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}/{}", self.x, self.y)
        }
    }
}

/// Formats a rational as `p/q` (always with the denominator).
pub fn rat_string(r: Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, a decimal like `0.25`, or a plain integer, exactly.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let ip: i64 = if int == "-" || int.is_empty() {
            0
        } else {
            int.parse().ok()?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return None;
        }
        let fp: i64 = frac.parse().ok()?;
        let den = 10i64.checked_pow(frac.len() as u32)?;
        let mag = Rat::from_integer(ip.abs()) + Rat::new(fp, den);
        return Some(if neg || ip < 0 { -mag } else { mag });
    }
    s.parse::<i64>().ok().map(Rat::from_integer)
}

/// Parses a slope: `inf`, `p/q`, a decimal, or an integer.
pub fn parse_slope(s: &str) -> Option<Slope> {
    let s = s.trim();
    if s == "inf" || s == "oo" || s == "infinity" {
        return Some(Slope::INFINITY);
    }
    parse_rat(s).map(Slope::of_rat)
}

/// Exact square of the Euclidean norm of an integer vector.
pub fn norm2(x: i64, y: i64) -> i64 {
    x * x + y * y
}

/// Exact 2x2 determinant of integer vectors.
pub fn det2(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Quadrant index of a nonzero integer direction, scanning
/// counterclockwise from east: 0 owns `[E, N)`, 1 owns `[N, W)`,
/// 2 owns `[W, S)`, 3 owns `[S, E)`.
pub fn quadrant(x: i64, y: i64) -> u8 {
    assert!(x != 0 || y != 0);
    if x > 0 && y >= 0 {
        0
    } else if y > 0 {
        1
    } else if x < 0 {
        2
    } else {
        3
    }
}

/// True when `m` lies strictly inside the counterclockwise arc from `a`
/// to `b`; all three are nonzero vectors and the arc from `a` to `b` is
/// assumed shorter than a full turn with `det(a, b) > 0`.
pub fn strictly_between_ccw(a: (i64, i64), m: (i64, i64), b: (i64, i64)) -> bool {
    debug_assert!(det2(a, b) > 0);
    det2(a, m) > 0 && det2(m, b) > 0
}

pub fn rat_is_negative(r: &Rat) -> bool {
    r.is_negative()
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_conventions() {
        assert_eq!(Slope::of_vector(3, 0), Slope::INFINITY);
        assert_eq!(Slope::of_vector(-3, 0), Slope::INFINITY);
        assert_eq!(Slope::of_vector(0, -2), Slope::ZERO);
        assert_eq!(Slope::of_vector(2, -4), Slope { x: -1, y: 2 });
        assert!(Slope::of_vector(1, 2) < Slope::of_vector(1, 1));
        assert!(Slope::of_vector(5, 1) < Slope::INFINITY);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rat("3/4"), Some(Rat::new(3, 4)));
        assert_eq!(parse_rat("0.25"), Some(Rat::new(1, 4)));
        assert_eq!(parse_rat("-1.5"), Some(Rat::new(-3, 2)));
        assert_eq!(parse_rat("7"), Some(Rat::from_integer(7)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_slope("inf"), Some(Slope::INFINITY));
    }

    #[test]
    fn quadrants() {
        assert_eq!(quadrant(1, 0), 0);
        assert_eq!(quadrant(2, 1), 0);
        assert_eq!(quadrant(0, 1), 1);
        assert_eq!(quadrant(-1, 1), 1);
        assert_eq!(quadrant(-1, 0), 2);
        assert_eq!(quadrant(-1, -1), 2);
        assert_eq!(quadrant(0, -1), 3);
        assert_eq!(quadrant(1, -1), 3);
    }
}
