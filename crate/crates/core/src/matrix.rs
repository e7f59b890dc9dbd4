//! Integer matrices of determinant one and their decompositions into
//! words over the standard generators `S = [[0,-1],[1,0]]` and
//! `T = [[1,1],[0,1]]`.
//!
//! Two layers: [`Sl2`] is an honest element of `SL(2, Z)` used wherever
//! an exact chart matters (the surface action, direction normalization),
//! and [`GroupElement`] is its projective class in `PSL(2, Z)` used for
//! group bookkeeping. The central `-1` acts nontrivially on surfaces, so
//! projective witnesses are always applied through both lifts.

use crate::slope::Slope;
use serde::{Deserialize, Serialize};
use std::fmt;

/// An element of `SL(2, Z)`: entries `[[a, b], [c, d]]`, `ad - bc = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sl2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 { a: 1, b: 0, c: 0, d: 1 };
    /// Counterclockwise quarter turn: `S(x, y) = (-y, x)`.
    pub const S: Sl2 = Sl2 { a: 0, b: -1, c: 1, d: 0 };
    /// Horizontal shear: `T(x, y) = (x + y, y)`.
    pub const T: Sl2 = Sl2 { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Sl2 {
        let m = Sl2 { a, b, c, d };
        assert_eq!(m.det(), 1, "determinant must be 1: {:?}", m);
        m
    }

    pub fn t_power(k: i64) -> Sl2 {
        Sl2 { a: 1, b: k, c: 0, d: 1 }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn neg(&self) -> Sl2 {
        Sl2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn mul(&self, rhs: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn apply_vec(&self, v: (i64, i64)) -> (i64, i64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    /// Action on boundary slopes (insensitive to the sign of the lift).
    pub fn apply_slope(&self, k: Slope) -> Slope {
        let (x, y) = self.apply_vec(k.primitive());
        Slope::of_vector(x, y)
    }

    pub fn projective(&self) -> GroupElement {
        GroupElement::of_sl2(*self)
    }
}

impl fmt::Debug for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// An element of `PSL(2, Z)`. The stored lift is the one whose first
/// nonzero entry in the order `a, b, c, d` is positive, so `g` and `-g`
/// compare equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(Sl2);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(Sl2::IDENTITY);

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> GroupElement {
        GroupElement::of_sl2(Sl2::new(a, b, c, d))
    }

    pub fn of_sl2(m: Sl2) -> GroupElement {
        let flip = if m.a != 0 {
            m.a < 0
        } else if m.b != 0 {
            m.b < 0
        } else {
            m.c < 0
        };
        GroupElement(if flip { m.neg() } else { m })
    }

    /// The projective class of the quarter turn.
    pub fn s() -> GroupElement {
        GroupElement::of_sl2(Sl2::S)
    }

    /// The projective class of the horizontal shear.
    pub fn t() -> GroupElement {
        GroupElement::of_sl2(Sl2::T)
    }

    pub fn t_power(k: i64) -> GroupElement {
        GroupElement::of_sl2(Sl2::t_power(k))
    }

    /// The canonical lift to `SL(2, Z)`.
    pub fn lift(&self) -> Sl2 {
        self.0
    }

    pub fn mul(&self, rhs: &GroupElement) -> GroupElement {
        GroupElement::of_sl2(self.0.mul(&rhs.0))
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement::of_sl2(self.0.inverse())
    }

    pub fn apply_slope(&self, k: Slope) -> Slope {
        self.0.apply_slope(k)
    }

    pub fn is_identity(&self) -> bool {
        *self == GroupElement::IDENTITY
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        [[self.0.a, self.0.b], [self.0.c, self.0.d]]
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Letters of words in the modular group. `S` is its own projective
/// inverse; the shear needs both directions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Letter {
    S,
    T,
    TInv,
}

impl Letter {
    pub fn sl2(&self) -> Sl2 {
        match self {
            Letter::S => Sl2::S,
            Letter::T => Sl2::T,
            Letter::TInv => Sl2::T.inverse(),
        }
    }

    /// Projective inverse (exact for `T`, up to sign for `S`).
    pub fn inverse(&self) -> Letter {
        match self {
            Letter::S => Letter::S,
            Letter::T => Letter::TInv,
            Letter::TInv => Letter::T,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::S => write!(f, "S"),
            Letter::T => write!(f, "T"),
            Letter::TInv => write!(f, "T'"),
        }
    }
}

/// A word over `{S, T, T'}`, leftmost letter applied last.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// The exact product in `SL(2, Z)`.
    pub fn sl2(&self) -> Sl2 {
        self.0.iter().fold(Sl2::IDENTITY, |m, l| m.mul(&l.sl2()))
    }

    /// The product as a projective class.
    pub fn group_element(&self) -> GroupElement {
        GroupElement::of_sl2(self.sl2())
    }

    /// A word whose exact product is the inverse matrix.
    pub fn inverse(&self) -> Word {
        let mut letters: Vec<Letter> = self.0.iter().rev().map(Letter::inverse).collect();
        // S occurs an odd number of times iff the naive reversal flips
        // the sign (S inverse is -S); compensate with S^2 = -1.
        let s_count = self.0.iter().filter(|l| **l == Letter::S).count();
        if s_count % 2 == 1 {
            letters.push(Letter::S);
            letters.push(Letter::S);
        }
        let w = Word(letters);
        debug_assert_eq!(w.sl2(), self.sl2().inverse());
        w
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&rhs.0);
        Word(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

/// Decomposes a projective class into a word multiplying out to either
/// lift, by the Euclidean algorithm on the first column. The number of
/// `S`-steps is logarithmic in the entries.
pub fn matrix_to_word(g: &GroupElement) -> Word {
    let (w, _) = euclid_word(g.lift());
    debug_assert_eq!(w.group_element(), *g);
    w
}

/// Decomposes an `SL(2, Z)` element into a word with that exact product.
pub fn sl2_to_word(m: Sl2) -> Word {
    let (mut w, product) = euclid_word(m);
    if product != m {
        debug_assert_eq!(product, m.neg());
        w.0.push(Letter::S);
        w.0.push(Letter::S);
    }
    debug_assert_eq!(w.sl2(), m);
    w
}

fn euclid_word(m0: Sl2) -> (Word, Sl2) {
    let mut m = m0;
    let mut ops: Vec<(bool, i64)> = Vec::new(); // (is_s, t_exponent)
    while m.c != 0 {
        let q = div_round(m.a, m.c);
        if q != 0 {
            m = Sl2::t_power(-q).mul(&m);
            ops.push((false, -q));
        }
        m = Sl2::S.mul(&m);
        ops.push((true, 0));
    }
    // Now m is an upper triangular element: +-T^b.
    debug_assert_eq!(m.a * m.d, 1);
    let sign_pos = m.a == 1;
    if m.b != 0 {
        ops.push((false, -m.a * m.b));
    }
    // ops_k ... ops_1 * m0 = +-1, so m0 = -+ product of inverses in order.
    let mut letters = Vec::new();
    let mut s_parity = false;
    for (is_s, e) in ops {
        if is_s {
            // S^-1 = -S: track the sign, emit S.
            letters.push(Letter::S);
            s_parity = !s_parity;
        } else {
            let l = if e < 0 { Letter::T } else { Letter::TInv };
            for _ in 0..e.unsigned_abs() {
                letters.push(l);
            }
        }
    }
    let _ = (sign_pos, s_parity);
    let w = Word(letters);
    let p = w.sl2();
    debug_assert!(p == m0 || p == m0.neg());
    (w, p)
}

fn div_round(a: i64, b: i64) -> i64 {
    // Nearest integer to a/b (ties toward the floor side).
    let q = a.div_euclid(b);
    let r = a - q * b; // 0 <= r < |b|
    if 2 * r > b.abs() {
        q + 1
    } else {
        q
    }
}
