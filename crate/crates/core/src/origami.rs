//! The exact surface model: a square-tiled translation surface given by
//! two permutations of `n` unit squares plus a set of marked vertex
//! classes, with canonical relabeling, isomorphism testing, and the
//! action of the modular group.

use crate::matrix::{sl2_to_word, Letter, Sl2, Word};
use crate::perm::Perm;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Corner of a unit square, in counterclockwise order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Corner {
    Sw = 0,
    Se = 1,
    Ne = 2,
    Nw = 3,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::Sw, Corner::Se, Corner::Ne, Corner::Nw];

    pub fn from_index(i: usize) -> Corner {
        Corner::ALL[i % 4]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Position of the corner in the unit square.
    pub fn position(self) -> (i64, i64) {
        match self {
            Corner::Sw => (0, 0),
            Corner::Se => (1, 0),
            Corner::Ne => (1, 1),
            Corner::Nw => (0, 1),
        }
    }

    pub fn name(self) -> &'static str {
        ["sw", "se", "ne", "nw"][self.index()]
    }

    pub fn parse(s: &str) -> Option<Corner> {
        match s.to_ascii_lowercase().as_str() {
            "sw" => Some(Corner::Sw),
            "se" => Some(Corner::Se),
            "ne" => Some(Corner::Ne),
            "nw" => Some(Corner::Nw),
            _ => None,
        }
    }
}

/// A quarter-plane sector at a vertex: the corner of one square.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Sector {
    pub square: usize,
    pub corner: Corner,
}

impl Sector {
    pub fn new(square: usize, corner: Corner) -> Sector {
        Sector { square, corner }
    }

    fn key(self) -> usize {
        self.square * 4 + self.corner.index()
    }
}

/// A vertex of the square complex: a cyclically ordered family of
/// sectors, with cone angle `turns * 2 pi`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VertexClass {
    pub id: usize,
    /// Sectors in counterclockwise rotation order around the vertex.
    pub corners: Vec<Sector>,
    /// Cone angle in multiples of `2 pi`.
    pub turns: usize,
    pub marked: bool,
}

impl VertexClass {
    pub fn is_singular(&self) -> bool {
        self.turns != 1
    }

    /// Cone angle in multiples of `pi/2` (the corner count).
    pub fn quarter_turns(&self) -> usize {
        self.corners.len()
    }
}

/// How the marked set is selected when building a surface.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Marking {
    /// Exactly the singular classes; falls back to the least vertex
    /// class when the surface is flat (torus covers need a marked point).
    Singular,
    /// Every vertex class.
    All,
    /// The classes containing the listed corners.
    Explicit(Vec<Sector>),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("permutation is not a bijection of 1..n")]
    BadPermutation,
    #[error("the squares are not connected by the two permutations")]
    Disconnected,
    #[error("explicit marking selects no vertex class")]
    EmptyMarking,
}

/// A square-tiled translation surface with marked points.
///
/// Squares are `0..n`; `h` maps each square to its right neighbor and
/// `v` to its top neighbor. Values are immutable after construction.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origami {
    n: usize,
    h: Perm,
    v: Perm,
    h_inv: Perm,
    v_inv: Perm,
    classes: Vec<VertexClass>,
    /// Class id of every sector, indexed by `square * 4 + corner`.
    corner_class: Vec<usize>,
}

impl Origami {
    pub fn build(n: usize, h: Perm, v: Perm, marking: &Marking) -> Result<Origami, BuildError> {
        if n == 0 || h.len() != n || v.len() != n || !h.is_valid() || !v.is_valid() {
            return Err(BuildError::BadPermutation);
        }
        if !is_transitive(n, &h, &v) {
            return Err(BuildError::Disconnected);
        }
        let h_inv = h.inverse();
        let v_inv = v.inverse();
        let (classes, corner_class) = vertex_classes_of(n, &h, &v, &h_inv, &v_inv);
        let mut o = Origami { n, h, v, h_inv, v_inv, classes, corner_class };
        let marked = match marking {
            Marking::All => (0..o.classes.len()).collect::<Vec<_>>(),
            Marking::Singular => {
                let singular: Vec<usize> = o
                    .classes
                    .iter()
                    .filter(|c| c.is_singular())
                    .map(|c| c.id)
                    .collect();
                if singular.is_empty() {
                    // Flat surface: mark the lexicographically least class.
                    vec![least_class(&o)]
                } else {
                    singular
                }
            }
            Marking::Explicit(list) => {
                let mut ids: Vec<usize> = list
                    .iter()
                    .filter(|s| s.square < n)
                    .map(|s| o.corner_class[s.key()])
                    .collect();
                ids.sort_unstable();
                ids.dedup();
                if ids.is_empty() {
                    return Err(BuildError::EmptyMarking);
                }
                ids
            }
        };
        for id in marked {
            o.classes[id].marked = true;
        }
        // Every singular class must be marked for geodesics to be
        // unambiguous; extend explicit markings accordingly.
        for c in o.classes.iter_mut() {
            if c.is_singular() {
                c.marked = true;
            }
        }
        Ok(o)
    }

    pub fn num_squares(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &Perm {
        &self.h
    }

    pub fn v(&self) -> &Perm {
        &self.v
    }

    #[inline]
    pub fn right(&self, sq: usize) -> usize {
        self.h.apply(sq)
    }

    #[inline]
    pub fn left(&self, sq: usize) -> usize {
        self.h_inv.apply(sq)
    }

    #[inline]
    pub fn above(&self, sq: usize) -> usize {
        self.v.apply(sq)
    }

    #[inline]
    pub fn below(&self, sq: usize) -> usize {
        self.v_inv.apply(sq)
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.classes
    }

    #[inline]
    pub fn class_of(&self, s: Sector) -> usize {
        self.corner_class[s.key()]
    }

    #[inline]
    pub fn is_marked(&self, s: Sector) -> bool {
        self.classes[self.class_of(s)].marked
    }

    pub fn marked_classes(&self) -> impl Iterator<Item = &VertexClass> {
        self.classes.iter().filter(|c| c.marked)
    }

    pub fn genus(&self) -> usize {
        // V - E + F with E = 2n, F = n.
        let chi = self.classes.len() as i64 - self.n as i64;
        ((2 - chi) / 2) as usize
    }

    /// One counterclockwise quarter-turn of a sector around its vertex.
    pub fn rotate_ccw(&self, s: Sector) -> Sector {
        match s.corner {
            Corner::Sw => Sector::new(self.left(s.square), Corner::Se),
            Corner::Se => Sector::new(self.below(s.square), Corner::Ne),
            Corner::Ne => Sector::new(self.right(s.square), Corner::Nw),
            Corner::Nw => Sector::new(self.above(s.square), Corner::Sw),
        }
    }

    pub fn rotate_cw(&self, s: Sector) -> Sector {
        match s.corner {
            Corner::Se => Sector::new(self.right(s.square), Corner::Sw),
            Corner::Ne => Sector::new(self.above(s.square), Corner::Se),
            Corner::Nw => Sector::new(self.left(s.square), Corner::Ne),
            Corner::Sw => Sector::new(self.below(s.square), Corner::Nw),
        }
    }

    /// Canonical relabeling: breadth-first search from each start square
    /// over (right, top, left, bottom) moves, keeping the start whose
    /// encoding is lexicographically least. Returns the relabeled surface
    /// and the map from old to new square labels.
    pub fn canonical_form(&self) -> (Origami, Perm) {
        let mut best: Option<(Vec<usize>, Perm)> = None;
        for start in 0..self.n {
            let relabel = self.bfs_labels(start);
            let key = self.encode_with(&relabel);
            match &best {
                Some((k, _)) if *k <= key => {}
                _ => best = Some((key, relabel)),
            }
        }
        let (_, relabel) = best.unwrap();
        (self.relabel(&relabel), relabel)
    }

    /// Stable bytes identifying the translation-isomorphism class
    /// (markings included).
    pub fn canonical_key(&self) -> Vec<usize> {
        (0..self.n)
            .map(|s| self.encode_with(&self.bfs_labels(s)))
            .min()
            .unwrap()
    }

    pub fn is_isomorphic(&self, other: &Origami) -> bool {
        self.n == other.n && self.canonical_key() == other.canonical_key()
    }

    fn bfs_labels(&self, start: usize) -> Perm {
        let mut label = vec![usize::MAX; self.n];
        let mut order = Vec::with_capacity(self.n);
        label[start] = 0;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let sq = order[head];
            head += 1;
            for nb in [self.right(sq), self.above(sq), self.left(sq), self.below(sq)] {
                if label[nb] == usize::MAX {
                    label[nb] = order.len();
                    order.push(nb);
                }
            }
        }
        Perm(label)
    }

    fn encode_with(&self, relabel: &Perm) -> Vec<usize> {
        let inv = relabel.inverse();
        let mut key = Vec::with_capacity(2 * self.n + 8);
        for new in 0..self.n {
            let old = inv.apply(new);
            key.push(relabel.apply(self.right(old)));
            key.push(relabel.apply(self.above(old)));
        }
        let mut marked: Vec<usize> = self
            .classes
            .iter()
            .filter(|c| c.marked)
            .map(|c| {
                c.corners
                    .iter()
                    .map(|s| relabel.apply(s.square) * 4 + s.corner.index())
                    .min()
                    .unwrap()
            })
            .collect();
        marked.sort_unstable();
        key.push(usize::MAX);
        key.extend(marked);
        key
    }

    fn relabel(&self, relabel: &Perm) -> Origami {
        let inv = relabel.inverse();
        let h = Perm((0..self.n).map(|j| relabel.apply(self.right(inv.apply(j)))).collect());
        let v = Perm((0..self.n).map(|j| relabel.apply(self.above(inv.apply(j)))).collect());
        let marked: Vec<Sector> = self
            .classes
            .iter()
            .filter(|c| c.marked)
            .map(|c| {
                let s = c.corners[0];
                Sector::new(relabel.apply(s.square), s.corner)
            })
            .collect();
        Origami::build(self.n, h, v, &Marking::Explicit(marked)).expect("relabeling is valid")
    }

    /// Applies one generator of the modular group. The square grid is
    /// recut, so squares keep their labels but the neighbor permutations
    /// and corner identifications change.
    pub fn apply_letter(&self, l: Letter) -> Origami {
        let (h2, v2, corner_map): (Perm, Perm, Box<dyn Fn(Sector) -> Sector + '_>) = match l {
            Letter::S => (
                self.v_inv.clone(),
                self.h.clone(),
                Box::new(|s: Sector| {
                    Sector::new(s.square, Corner::from_index(s.corner.index() + 1))
                }),
            ),
            Letter::T => (
                self.h.clone(),
                self.v.compose(&self.h_inv),
                Box::new(|s: Sector| match s.corner {
                    Corner::Sw | Corner::Se => s,
                    Corner::Nw => Sector::new(s.square, Corner::Ne),
                    Corner::Ne => Sector::new(self.right(s.square), Corner::Ne),
                }),
            ),
            Letter::TInv => (
                self.h.clone(),
                self.v.compose(&self.h),
                Box::new(|s: Sector| match s.corner {
                    Corner::Sw | Corner::Se => s,
                    Corner::Ne => Sector::new(s.square, Corner::Nw),
                    Corner::Nw => Sector::new(self.left(s.square), Corner::Nw),
                }),
            ),
        };
        let marked: Vec<Sector> = self
            .classes
            .iter()
            .filter(|c| c.marked)
            .map(|c| corner_map(c.corners[0]))
            .collect();
        let out = Origami::build(self.n, h2, v2, &Marking::Explicit(marked))
            .expect("generator action preserves validity");
        debug_assert_eq!(self.angle_multiset(), out.angle_multiset());
        out
    }

    pub fn apply_word(&self, w: &Word) -> Origami {
        let mut o = self.clone();
        for l in w.0.iter().rev() {
            o = o.apply_letter(*l);
        }
        o
    }

    /// The surface `m . self`, computed through an exact word
    /// decomposition of `m`. This is an honest left action of
    /// `SL(2, Z)`: composing applications agrees with applying the
    /// product, up to isomorphism.
    pub fn apply_matrix(&self, m: &Sl2) -> Origami {
        self.apply_word(&sl2_to_word(*m))
    }

    /// Multiset of cone angles in quarter turns, an action invariant.
    pub fn angle_multiset(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.classes.iter().map(|c| c.quarter_turns()).collect();
        m.sort_unstable();
        m
    }
}

impl fmt::Debug for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Origami(n={}, h={:?}, v={:?}, marked=[{}])",
            self.n,
            self.h,
            self.v,
            self.classes
                .iter()
                .filter(|c| c.marked)
                .map(|c| format!("{}", c.id))
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

fn is_transitive(n: usize, h: &Perm, v: &Perm) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let (hi, vi) = (h.inverse(), v.inverse());
    while let Some(sq) = stack.pop() {
        for nb in [h.apply(sq), v.apply(sq), hi.apply(sq), vi.apply(sq)] {
            if !seen[nb] {
                seen[nb] = true;
                stack.push(nb);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

fn vertex_classes_of(
    n: usize,
    h: &Perm,
    v: &Perm,
    h_inv: &Perm,
    v_inv: &Perm,
) -> (Vec<VertexClass>, Vec<usize>) {
    let rot = |s: Sector| -> Sector {
        match s.corner {
            Corner::Sw => Sector::new(h_inv.apply(s.square), Corner::Se),
            Corner::Se => Sector::new(v_inv.apply(s.square), Corner::Ne),
            Corner::Ne => Sector::new(h.apply(s.square), Corner::Nw),
            Corner::Nw => Sector::new(v.apply(s.square), Corner::Sw),
        }
    };
    let mut corner_class = vec![usize::MAX; 4 * n];
    let mut classes = Vec::new();
    for sq in 0..n {
        for corner in Corner::ALL {
            let start = Sector::new(sq, corner);
            if corner_class[start.key()] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                corner_class[cur.key()] = id;
                cycle.push(cur);
                cur = rot(cur);
                if cur == start {
                    break;
                }
            }
            debug_assert_eq!(cycle.len() % 4, 0);
            let turns = cycle.len() / 4;
            classes.push(VertexClass { id, corners: cycle, turns, marked: false });
        }
    }
    (classes, corner_class)
}

fn least_class(o: &Origami) -> usize {
    // Least by the minimal (square, corner) key among its corners.
    (0..o.classes.len())
        .min_by_key(|&id| {
            o.classes[id]
                .corners
                .iter()
                .map(|s| s.key())
                .min()
                .unwrap()
        })
        .unwrap()
}

/// Small surfaces used across the test suites and documentation.
pub mod samples {
    use super::*;

    /// The unit torus: one square, the lattice point marked.
    pub fn torus() -> Origami {
        Origami::build(1, Perm::identity(1), Perm::identity(1), &Marking::All).unwrap()
    }

    /// The two-square torus cover with every vertex class marked.
    pub fn torus_double() -> Origami {
        Origami::build(
            2,
            Perm::from_cycles(2, &[vec![0, 1]]).unwrap(),
            Perm::identity(2),
            &Marking::All,
        )
        .unwrap()
    }

    /// The L-shaped surface of three squares with one cone point of
    /// angle `6 pi`: squares 1, 2 side by side, square 3 on top of 1.
    pub fn l3() -> Origami {
        Origami::build(
            3,
            Perm::from_cycles(3, &[vec![0, 1]]).unwrap(),
            Perm::from_cycles(3, &[vec![0, 2]]).unwrap(),
            &Marking::Singular,
        )
        .unwrap()
    }

    /// A four-square surface with one cone point of angle `6 pi` and one
    /// regular point, horizontally periodic with a single cylinder of
    /// circumference four; only the cone point is marked.
    pub fn w4() -> Origami {
        Origami::build(
            4,
            Perm::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap(),
            Perm::from_cycles(4, &[vec![2, 3]]).unwrap(),
            &Marking::Singular,
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    /// Vertex classes computed independently via union-find on the four
    /// corner-identification relations.
    fn class_sizes_by_union_find(o: &Origami) -> Vec<usize> {
        let n = o.num_squares();
        let mut parent: Vec<usize> = (0..4 * n).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        let union = |p: &mut Vec<usize>, a: Sector, b: Sector| {
            let (ra, rb) = (find(p, a.key()), find(p, b.key()));
            p[ra] = rb;
        };
        for sq in 0..n {
            // Shared points along the glued edges.
            union(&mut parent, Sector::new(sq, Corner::Se), Sector::new(o.right(sq), Corner::Sw));
            union(&mut parent, Sector::new(sq, Corner::Ne), Sector::new(o.right(sq), Corner::Nw));
            union(&mut parent, Sector::new(sq, Corner::Nw), Sector::new(o.above(sq), Corner::Sw));
            union(&mut parent, Sector::new(sq, Corner::Ne), Sector::new(o.above(sq), Corner::Se));
        }
        let mut count = std::collections::BTreeMap::new();
        for i in 0..4 * n {
            *count.entry(find(&mut parent, i)).or_insert(0usize) += 1;
        }
        let mut sizes: Vec<usize> = count.into_values().collect();
        sizes.sort_unstable();
        sizes
    }

    fn gauss_bonnet_holds(o: &Origami) -> bool {
        // Sum of (angle - 2 pi) over classes equals (4g - 4) pi, in
        // units of pi: sum of (4 turns - 4)/... measured in quarters.
        let g = o.genus() as i64;
        let sum: i64 = o
            .vertex_classes()
            .iter()
            .map(|c| 2 * (c.turns as i64) - 2)
            .sum();
        sum == 4 * g - 4
    }

    #[test]
    fn torus_classes() {
        let t = torus();
        assert_eq!(t.vertex_classes().len(), 1);
        assert_eq!(t.vertex_classes()[0].turns, 1);
        assert!(t.vertex_classes()[0].marked);
        assert_eq!(t.genus(), 1);
        assert!(gauss_bonnet_holds(&t));
    }

    #[test]
    fn l3_has_single_cone_point() {
        let o = l3();
        assert_eq!(o.vertex_classes().len(), 1);
        assert_eq!(o.vertex_classes()[0].turns, 3); // angle 6 pi
        assert_eq!(o.genus(), 2);
        assert!(gauss_bonnet_holds(&o));
        assert_eq!(class_sizes_by_union_find(&o), vec![12]);
    }

    #[test]
    fn w4_splits_into_cone_and_regular_point() {
        let o = w4();
        let mut turns: Vec<usize> = o.vertex_classes().iter().map(|c| c.turns).collect();
        turns.sort_unstable();
        assert_eq!(turns, vec![1, 3]); // angles 2 pi and 6 pi
        let marked: Vec<bool> = o
            .vertex_classes()
            .iter()
            .map(|c| (c.turns, c.marked))
            .map(|(t, m)| (t == 3) == m)
            .collect();
        assert!(marked.iter().all(|&b| b), "only the cone point is marked");
        assert_eq!(o.genus(), 2);
        assert!(gauss_bonnet_holds(&o));
        assert_eq!(class_sizes_by_union_find(&o), vec![4, 12]);
    }

    #[test]
    fn disconnected_is_rejected() {
        let r = Origami::build(2, Perm::identity(2), Perm::identity(2), &Marking::All);
        assert_eq!(r.unwrap_err(), BuildError::Disconnected);
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let o = l3();
        // Relabel squares by the swap (2 3) and rebuild.
        let h = Perm::from_cycles(3, &[vec![0, 2]]).unwrap();
        let v = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let p = Origami::build(3, h, v, &Marking::Singular).unwrap();
        assert!(o.is_isomorphic(&p));
        assert_eq!(o.canonical_key(), p.canonical_key());
        let (c1, _) = o.canonical_form();
        let (c2, _) = c1.canonical_form();
        assert_eq!(c1.canonical_key(), c2.canonical_key());
    }

    #[test]
    fn different_surfaces_are_not_isomorphic() {
        assert!(!l3().is_isomorphic(&w4()));
        assert!(!torus().is_isomorphic(&torus_double()));
    }

    #[test]
    fn generator_actions_preserve_structure() {
        for o in [torus(), torus_double(), l3(), w4()] {
            for l in [Letter::S, Letter::T, Letter::TInv] {
                let p = o.apply_letter(l);
                assert_eq!(p.angle_multiset(), o.angle_multiset());
            }
            // T then T' is the identity on isomorphism classes.
            let fwd = o.apply_letter(Letter::T).apply_letter(Letter::TInv);
            assert!(fwd.is_isomorphic(&o));
            // Four quarter turns return to the start.
            let mut r = o.clone();
            for _ in 0..4 {
                r = r.apply_letter(Letter::S);
            }
            assert!(r.is_isomorphic(&o));
        }
    }

    #[test]
    fn torus_is_stabilized_by_everything() {
        let t = torus();
        for m in [
            Sl2::T,
            Sl2::S,
            Sl2::new(2, 1, 1, 1),
            Sl2::new(1, 0, 1, 1),
            Sl2::new(-1, 0, 0, -1),
        ] {
            assert!(t.apply_matrix(&m).is_isomorphic(&t));
        }
    }

    #[test]
    fn sl2_action_composition_law() {
        let samples = [Sl2::new(2, 1, 1, 1), Sl2::S, Sl2::new(1, -2, 0, 1)];
        for o in [l3(), w4()] {
            for m1 in samples {
                for m2 in samples {
                    let lhs = o.apply_matrix(&m1).apply_matrix(&m2);
                    let rhs = o.apply_matrix(&m2.mul(&m1));
                    assert!(lhs.is_isomorphic(&rhs));
                }
            }
        }
    }

    #[test]
    fn inverse_law_on_l3() {
        let o = l3();
        for m in [Sl2::new(2, 1, 1, 1), Sl2::S, Sl2::new(1, 3, 0, 1)] {
            let back = o.apply_matrix(&m).apply_matrix(&m.inverse());
            assert!(back.is_isomorphic(&o));
        }
    }
}
