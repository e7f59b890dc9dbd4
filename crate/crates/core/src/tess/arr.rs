//! Exact arrangement of complete geodesics in the upper half plane,
//! compactified over the boundary circle, with face extraction and
//! certification of which faces are genuine tiles.
//!
//! Interior vertices have rational `x` and rational `y^2`; angular
//! comparisons at a vertex happen in the quadratic extension generated
//! by `y`. Ideal vertices are boundary slopes; the rotation there is
//! the circular order of opposite endpoints.

use super::{
    cusp_pencil, witness_geodesic, Geodesic, Region, Shape,
};
use crate::origami::Origami;
use crate::slope::{det2, Rat, Slope};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// An element `a + b sqrt(q)` of a real quadratic extension; `q >= 0`
/// is fixed per comparison context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Ext {
    a: Rat,
    b: Rat,
}

impl Ext {
    fn rat(a: Rat) -> Ext {
        Ext { a, b: Rat::zero() }
    }

    fn root(b: Rat) -> Ext {
        Ext { a: Rat::zero(), b }
    }

    fn mul(self, rhs: Ext, q: Rat) -> Ext {
        Ext { a: self.a * rhs.a + self.b * rhs.b * q, b: self.a * rhs.b + self.b * rhs.a }
    }

    fn sub(self, rhs: Ext) -> Ext {
        Ext { a: self.a - rhs.a, b: self.b - rhs.b }
    }

    fn signum(self, q: Rat) -> i8 {
        let (sa, sb) = (rat_sign(self.a), rat_sign(self.b));
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return if q.is_zero() { 0 } else { sb };
        }
        if sa == sb {
            return sa;
        }
        // Compare a^2 against b^2 q with opposite signs.
        let lhs = self.a * self.a;
        let rhs = self.b * self.b * q;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

fn rat_sign(r: Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Direction vector with components in the quadratic extension.
#[derive(Clone, Copy, Debug)]
struct Dir {
    dx: Ext,
    dy: Ext,
}

impl Dir {
    /// Counterclockwise comparison key: the quadrant, then within a
    /// quadrant directions sort by the cross product.
    fn quadrant(&self, q: Rat) -> u8 {
        let sx = self.dx.signum(q);
        let sy = self.dy.signum(q);
        debug_assert!(sx != 0 || sy != 0);
        match (sx, sy) {
            (1, 0) => 0,
            (1, 1) => 1,
            (0, 1) => 2,
            (-1, 1) => 3,
            (-1, 0) => 4,
            (-1, -1) => 5,
            (0, -1) => 6,
            _ => 7,
        }
    }

    fn cross(&self, other: &Dir, q: Rat) -> i8 {
        self.dx.mul(other.dy, q).sub(self.dy.mul(other.dx, q)).signum(q)
    }
}

fn ccw_cmp(a: &Dir, b: &Dir, q: Rat) -> std::cmp::Ordering {
    let (qa, qb) = (a.quadrant(q), b.quadrant(q));
    if qa != qb {
        return qa.cmp(&qb);
    }
    match a.cross(b, q) {
        1 => std::cmp::Ordering::Less,
        -1 => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal,
    }
}

/// Node of the compactified arrangement.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Node {
    /// Interior crossing, indexing into the vertex table.
    Interior(usize),
    /// Boundary point.
    Ideal(Slope),
}

/// One face of the tessellation patch.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Face {
    pub ideal_vertices: Vec<Slope>,
    /// Interior crossing points as (x, y^2).
    pub interior_vertices: Vec<(Rat, Rat)>,
    /// Distinct geodesics carrying the sides.
    pub sides: Vec<Geodesic>,
    /// Number of geodesic segments in the boundary walk.
    pub side_count: usize,
    /// Whether the face closure contains an arc of the boundary circle.
    pub touches_boundary: bool,
    /// Certified to be a tile of the full tessellation.
    pub complete: bool,
    /// Hyperbolic area (reported for complete faces only).
    pub area: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Patch {
    pub region: Region,
    pub geodesics: Vec<Geodesic>,
    pub faces: Vec<Face>,
}

/// Computes the tessellation patch over a region: the arrangement of
/// all family geodesics meeting it, its faces, and for each face free
/// of boundary arcs an exact verdict on whether it is a tile of the
/// full tessellation.
pub fn faces_in_region(o: &Origami, region: &Region) -> Patch {
    let geodesics: Vec<Geodesic> =
        super::geodesics_in_region(o, region).into_keys().collect();
    if geodesics.is_empty() {
        return Patch {
            region: *region,
            geodesics,
            faces: vec![Face {
                ideal_vertices: Vec::new(),
                interior_vertices: Vec::new(),
                sides: Vec::new(),
                side_count: 0,
                touches_boundary: true,
                complete: false,
                area: None,
            }],
        };
    }
    let arrangement = Arrangement::build(&geodesics);
    let faces = arrangement.extract_faces(o, &geodesics);
    Patch { region: *region, geodesics, faces }
}

struct Arrangement {
    curves: Vec<Geodesic>,
    /// Interior vertices (x, y^2).
    verts: Vec<(Rat, Rat)>,
    #[allow(dead_code)]
    on_vert: Vec<Vec<usize>>,
    /// Ideal nodes in boundary circular order (finite ascending, then
    /// infinity last when present).
    #[allow(dead_code)]
    ideal: Vec<Slope>,
    /// Edges: (curve index or usize::MAX for boundary, tail, head).
    edges: Vec<(usize, Node, Node)>,
    /// Half-edge successor table.
    next: Vec<usize>,
    twin: Vec<usize>,
}

impl Arrangement {
    fn build(curves: &[Geodesic]) -> Arrangement {
        // Interior vertices from pairwise crossings, checked against
        // every curve for concurrency.
        let mut vert_ix: BTreeMap<(Rat, Rat), usize> = BTreeMap::new();
        let mut verts: Vec<(Rat, Rat)> = Vec::new();
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                if let Some(p) = crossing(&curves[i], &curves[j]) {
                    vert_ix.entry(p).or_insert_with(|| {
                        verts.push(p);
                        verts.len() - 1
                    });
                }
            }
        }
        let mut on_vert: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
        for (p, &vi) in &vert_ix {
            for (ci, c) in curves.iter().enumerate() {
                if lies_on(c, *p) {
                    on_vert[vi].push(ci);
                }
            }
            debug_assert!(on_vert[vi].len() >= 2);
        }

        // Ideal nodes: endpoints of the curves in circular order.
        let mut ideal: BTreeSet<Slope> = BTreeSet::new();
        for c in curves {
            ideal.insert(c.a);
            ideal.insert(c.b);
        }
        let ideal: Vec<Slope> = ideal.into_iter().collect(); // finite asc, inf last

        // Edges along each curve.
        let mut edges: Vec<(usize, Node, Node)> = Vec::new();
        for (ci, c) in curves.iter().enumerate() {
            let mut on: Vec<usize> = vert_ix
                .iter()
                .filter(|(p, _)| lies_on(c, **p))
                .map(|(_, &vi)| vi)
                .collect();
            match c.shape() {
                Shape::Arc { .. } => on.sort_by_key(|&vi| verts[vi].0),
                Shape::Vertical { .. } => on.sort_by(|&a, &b| verts[a].1.cmp(&verts[b].1)),
            }
            let mut chain: Vec<Node> = Vec::new();
            chain.push(Node::Ideal(c.a));
            chain.extend(on.iter().map(|&vi| Node::Interior(vi)));
            chain.push(Node::Ideal(c.b));
            for w in chain.windows(2) {
                edges.push((ci, w[0], w[1]));
            }
        }
        // Boundary arcs between circularly consecutive ideal nodes.
        let bnd = usize::MAX;
        for i in 0..ideal.len() {
            let a = ideal[i];
            let b = ideal[(i + 1) % ideal.len()];
            edges.push((bnd, Node::Ideal(a), Node::Ideal(b)));
        }

        let mut arr = Arrangement {
            curves: curves.to_vec(),
            verts,
            on_vert,
            ideal,
            edges,
            next: Vec::new(),
            twin: Vec::new(),
        };
        arr.wire_half_edges();
        arr
    }

    /// Half-edge `2e` runs along edge `e` forward, `2e + 1` backward.
    fn wire_half_edges(&mut self) {
        let h = 2 * self.edges.len();
        self.twin = (0..h).map(|i| i ^ 1).collect();
        // Out-edges per node with rotation keys.
        let mut out: BTreeMap<Node, Vec<usize>> = BTreeMap::new();
        for (e, &(_, a, b)) in self.edges.iter().enumerate() {
            out.entry(a).or_default().push(2 * e);
            out.entry(b).or_default().push(2 * e + 1);
        }
        let mut rotation: BTreeMap<Node, Vec<usize>> = BTreeMap::new();
        for (node, hes) in out {
            let sorted = match node {
                Node::Interior(vi) => self.sort_interior(vi, hes),
                Node::Ideal(k) => self.sort_ideal(k, hes),
            };
            rotation.insert(node, sorted);
        }
        // Face successor: the clockwise neighbor of the twin at the head.
        self.next = vec![usize::MAX; h];
        for he in 0..h {
            let head = self.head(he);
            let rot = &rotation[&head];
            let pos = rot.iter().position(|&x| x == self.twin[he]).unwrap();
            let nxt = rot[(pos + rot.len() - 1) % rot.len()];
            self.next[he] = nxt;
        }
    }

    fn tail(&self, he: usize) -> Node {
        let (_, a, b) = self.edges[he / 2];
        if he % 2 == 0 {
            a
        } else {
            b
        }
    }

    fn head(&self, he: usize) -> Node {
        let (_, a, b) = self.edges[he / 2];
        if he % 2 == 0 {
            b
        } else {
            a
        }
    }

    fn curve_of(&self, he: usize) -> usize {
        self.edges[he / 2].0
    }

    /// Rotation at an interior vertex: exact angles in the extension by
    /// the vertex height.
    fn sort_interior(&self, vi: usize, hes: Vec<usize>) -> Vec<usize> {
        let (x, y2) = self.verts[vi];
        let q = y2;
        let mut keyed: Vec<(Dir, usize)> = hes
            .into_iter()
            .map(|he| {
                let ci = self.curve_of(he);
                debug_assert!(ci != usize::MAX, "boundary edges never meet interior vertices");
                let forward = self.points_forward(he, vi);
                let d = match self.curves[ci].shape() {
                    Shape::Vertical { .. } => Dir {
                        dx: Ext::rat(Rat::zero()),
                        dy: Ext::rat(if forward { Rat::from_integer(1) } else { Rat::from_integer(-1) }),
                    },
                    Shape::Arc { c, .. } => {
                        // Tangent along increasing x: (y, c - x).
                        let sign = if forward { Rat::from_integer(1) } else { Rat::from_integer(-1) };
                        Dir { dx: Ext::root(sign), dy: Ext::rat(sign * (c - x)) }
                    }
                };
                (d, he)
            })
            .collect();
        keyed.sort_by(|a, b| ccw_cmp(&a.0, &b.0, q));
        for w in keyed.windows(2) {
            debug_assert!(
                ccw_cmp(&w[0].0, &w[1].0, q) == std::cmp::Ordering::Less,
                "all crossings are transverse"
            );
        }
        keyed.into_iter().map(|(_, he)| he).collect()
    }

    /// Does the half-edge leave the vertex in the curve's forward
    /// direction (increasing x for arcs, increasing y for verticals)?
    fn points_forward(&self, he: usize, _vi: usize) -> bool {
        // Forward half-edges (even) leave the tail toward the head,
        // which is later in curve order by construction.
        he % 2 == 0
    }

    /// Rotation at an ideal node: boundary germ toward the next node
    /// counterclockwise, then curve germs ordered by their opposite
    /// endpoints circularly, then the backward boundary germ.
    fn sort_ideal(&self, k: Slope, hes: Vec<usize>) -> Vec<usize> {
        let mut bd_fwd: Option<usize> = None;
        let mut bd_bwd: Option<usize> = None;
        let mut curve_ends: Vec<(OrderKey, usize)> = Vec::new();
        for he in hes {
            if self.curve_of(he) == usize::MAX {
                // Outgoing boundary germ: forward if it runs along the
                // circular order (tail == k and the edge is tail->head).
                if he % 2 == 0 {
                    bd_fwd = Some(he);
                } else {
                    bd_bwd = Some(he);
                }
                continue;
            }
            let c = &self.curves[self.curve_of(he)];
            let other = if c.a == k { c.b } else { c.a };
            curve_ends.push((circular_key(k, other), he));
        }
        curve_ends.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out = Vec::new();
        if let Some(f) = bd_fwd {
            out.push(f);
        }
        out.extend(curve_ends.into_iter().map(|(_, he)| he));
        if let Some(b) = bd_bwd {
            out.push(b);
        }
        out
    }

    fn extract_faces(&self, o: &Origami, family: &[Geodesic]) -> Vec<Face> {
        let h = self.next.len();
        let mut face_of = vec![usize::MAX; h];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for start in 0..h {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut walk = Vec::new();
            let mut cur = start;
            loop {
                face_of[cur] = id;
                walk.push(cur);
                cur = self.next[cur];
                if cur == start {
                    break;
                }
                assert!(walk.len() <= h, "face walk does not close");
            }
            orbits.push(walk);
        }
        // The outer face contains a backward boundary half-edge (the
        // boundary circle traversed clockwise).
        let outer = (0..self.edges.len())
            .find(|&e| self.edges[e].0 == usize::MAX)
            .map(|e| face_of[2 * e + 1]);

        let family_set: BTreeSet<Geodesic> = family.iter().copied().collect();
        let mut pencils: BTreeMap<Slope, super::CuspPencil> = BTreeMap::new();
        let mut crosser_cache: BTreeMap<Geodesic, Vec<Geodesic>> = BTreeMap::new();

        let mut faces = Vec::new();
        for (id, walk) in orbits.iter().enumerate() {
            if Some(id) == outer {
                continue;
            }
            let mut ideal_vertices: Vec<Slope> = Vec::new();
            let mut interior_vertices: Vec<(Rat, Rat)> = Vec::new();
            let mut sides: Vec<Geodesic> = Vec::new();
            let mut side_count = 0usize;
            let mut touches_boundary = false;
            // Wedges at ideal vertices: (vertex, incoming curve, outgoing curve).
            let mut wedges: Vec<(Slope, Geodesic, Geodesic)> = Vec::new();
            for (i, &he) in walk.iter().enumerate() {
                let ci = self.curve_of(he);
                if ci == usize::MAX {
                    touches_boundary = true;
                } else {
                    side_count += 1;
                    let g = self.curves[ci];
                    if !sides.contains(&g) {
                        sides.push(g);
                    }
                }
                match self.tail(he) {
                    Node::Ideal(k) => {
                        if !ideal_vertices.contains(&k) {
                            ideal_vertices.push(k);
                        }
                        let prev = walk[(i + walk.len() - 1) % walk.len()];
                        let (pc, nc) = (self.curve_of(prev), self.curve_of(he));
                        if pc != usize::MAX && nc != usize::MAX {
                            wedges.push((k, self.curves[pc], self.curves[nc]));
                        }
                    }
                    Node::Interior(vi) => {
                        if !interior_vertices.contains(&self.verts[vi]) {
                            interior_vertices.push(self.verts[vi]);
                        }
                    }
                }
            }

            let mut complete = !touches_boundary && !sides.is_empty();
            if complete {
                // No family geodesic may split a wedge at an ideal vertex.
                for (k, g1, g2) in &wedges {
                    let pencil = pencils
                        .entry(*k)
                        .or_insert_with(|| cusp_pencil(o, *k));
                    let v1 = chart_position(pencil, g1, *k);
                    let v2 = chart_position(pencil, g2, *k);
                    let (lo, hi) = (v1.min(v2), v1.max(v2));
                    if pencil.meets_open_interval(lo, hi) {
                        complete = false;
                        break;
                    }
                }
            }
            if complete {
                // No family geodesic outside the patch may cross a side
                // into the face.
                'sides: for g in &sides {
                    let candidates = crosser_cache
                        .entry(*g)
                        .or_insert_with(|| crosser_candidates(o, g));
                    for cand in candidates.iter() {
                        if family_set.contains(cand) {
                            continue;
                        }
                        if crosses_face(cand, &ideal_vertices, &interior_vertices)
                            && witness_geodesic(o, cand.a, cand.b).is_some()
                        {
                            complete = false;
                            break 'sides;
                        }
                    }
                }
            }
            let area = if complete {
                Some(self.face_area(walk))
            } else {
                None
            };
            faces.push(Face {
                ideal_vertices,
                interior_vertices,
                sides,
                side_count,
                touches_boundary,
                complete,
                area,
            });
        }
        faces
    }

    /// Hyperbolic area of a geodesic polygon face: the total boundary
    /// turning minus 2 pi (ideal vertices turn by pi).
    fn face_area(&self, walk: &[usize]) -> f64 {
        let mut total_turn = 0.0f64;
        let m = walk.len();
        for i in 0..m {
            let he = walk[i];
            let nxt = walk[(i + 1) % m];
            match self.head(he) {
                Node::Ideal(_) => total_turn += std::f64::consts::PI,
                Node::Interior(vi) => {
                    let d_in = self.dir_at(he, vi, false);
                    let d_out = self.dir_at(nxt, vi, true);
                    let a_in = d_in.1.atan2(d_in.0);
                    let a_out = d_out.1.atan2(d_out.0);
                    let mut turn = a_out - a_in;
                    while turn <= -std::f64::consts::PI {
                        turn += 2.0 * std::f64::consts::PI;
                    }
                    while turn > std::f64::consts::PI {
                        turn -= 2.0 * std::f64::consts::PI;
                    }
                    total_turn += turn;
                }
            }
        }
        total_turn - 2.0 * std::f64::consts::PI
    }

    /// Euclidean travel direction of the half-edge at an interior
    /// vertex (the same vector serves as incoming direction at the head
    /// and outgoing direction at the tail).
    fn dir_at(&self, he: usize, vi: usize, _outgoing: bool) -> (f64, f64) {
        let (x, y2) = self.verts[vi];
        let xf = rat_f64(x);
        let y = rat_f64(y2).sqrt();
        let ci = self.curve_of(he);
        debug_assert!(ci != usize::MAX);
        let s = if he % 2 == 0 { 1.0 } else { -1.0 };
        match self.curves[ci].shape() {
            Shape::Vertical { .. } => (0.0, s),
            Shape::Arc { c, .. } => {
                let cf = rat_f64(c);
                (s * y, s * (cf - xf))
            }
        }
    }
}

fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Chart position of the geodesic's other endpoint at the cusp `k`.
fn chart_position(pencil: &super::CuspPencil, g: &Geodesic, k: Slope) -> Rat {
    let other = if g.a == k { g.b } else { g.a };
    debug_assert!(g.a == k || g.b == k);
    let s = pencil.chart.apply_slope(other);
    debug_assert!(!s.is_infinite());
    s.value().unwrap()
}

/// Candidate geodesics crossing `g`, from the finite box bounds in the
/// chart sending one endpoint to infinity. A superset of the true
/// crossers; each candidate still needs an embedding witness.
fn crosser_candidates(o: &Origami, g: &Geodesic) -> Vec<Geodesic> {
    let n = o.num_squares() as i64;
    let chart = crate::veech::direction_to_horizontal(g.b);
    let k1 = chart.apply_slope(g.a);
    let (xp, yp) = k1.primitive();
    debug_assert!(yp > 0, "the two endpoints are distinct");
    let inv = chart.inverse();
    // Slopes u = xs/ys with |xs yp - xp ys| <= 2 n yp, ys in 1..=2 n yp.
    let mut left: Vec<Slope> = Vec::new();
    let mut right: Vec<Slope> = Vec::new();
    for ys in 1..=(2 * n * yp) {
        let center = Rat::new(xp * ys, yp);
        let lo = (center - Rat::from_integer(2 * n)).ceil().to_integer();
        let hi = (center + Rat::from_integer(2 * n)).floor().to_integer();
        for xs in lo..=hi {
            if num_integer::gcd(xs, ys) != 1 {
                continue;
            }
            let s = Slope { x: xs, y: ys };
            if s == k1 {
                continue;
            }
            if s < k1 {
                left.push(s);
            } else {
                right.push(s);
            }
        }
    }
    let mut out: Vec<Geodesic> = Vec::new();
    for &u in &left {
        for &w in &right {
            if det2(u.primitive(), w.primitive()).abs() > 2 * n {
                continue;
            }
            let a = inv.apply_slope(u);
            let b = inv.apply_slope(w);
            if a != b {
                out.push(Geodesic::new(a, b));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Does the geodesic separate the face's vertices strictly?
fn crosses_face(
    g: &Geodesic,
    ideal_vertices: &[Slope],
    interior_vertices: &[(Rat, Rat)],
) -> bool {
    let mut pos = false;
    let mut neg = false;
    for &k in ideal_vertices {
        match super::boundary_side(g, k) {
            1 => pos = true,
            -1 => neg = true,
            _ => {}
        }
    }
    for &(x, y2) in interior_vertices {
        match side_of_circle_sq(g, x, y2) {
            1 => pos = true,
            -1 => neg = true,
            _ => {}
        }
    }
    pos && neg
}

fn side_of_circle_sq(g: &Geodesic, x: Rat, y2: Rat) -> i8 {
    match g.shape() {
        Shape::Vertical { x: v } => rat_sign(x - v),
        Shape::Arc { c, r } => rat_sign((x - c) * (x - c) + y2 - r * r),
    }
}

/// Interior crossing point of two geodesics, as (x, y^2) with y > 0.
fn crossing(g1: &Geodesic, g2: &Geodesic) -> Option<(Rat, Rat)> {
    match (g1.shape(), g2.shape()) {
        (Shape::Vertical { .. }, Shape::Vertical { .. }) => None,
        (Shape::Vertical { x }, Shape::Arc { c, r })
        | (Shape::Arc { c, r }, Shape::Vertical { x }) => {
            let y2 = r * r - (x - c) * (x - c);
            if y2.is_positive() {
                Some((x, y2))
            } else {
                None
            }
        }
        (Shape::Arc { c: c1, r: r1 }, Shape::Arc { c: c2, r: r2 }) => {
            if c1 == c2 {
                return None;
            }
            let two = Rat::from_integer(2);
            let x = ((c2 * c2 - r2 * r2) - (c1 * c1 - r1 * r1)) / (two * (c2 - c1));
            let y2 = r1 * r1 - (x - c1) * (x - c1);
            if y2.is_positive() {
                Some((x, y2))
            } else {
                None
            }
        }
    }
}

fn lies_on(g: &Geodesic, p: (Rat, Rat)) -> bool {
    match g.shape() {
        Shape::Vertical { x } => p.0 == x,
        Shape::Arc { c, r } => (p.0 - c) * (p.0 - c) + p.1 == r * r,
    }
}

/// Circular order key of `other` as seen from the cusp `k`: ascending
/// along the boundary starting just above `k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum OrderKey {
    AboveFinite(Rat),
    Infinity,
    BelowFinite(Rat),
    FromInfinity(Rat),
}

fn circular_key(k: Slope, other: Slope) -> OrderKey {
    if k.is_infinite() {
        // Verticals at the top node sort ascending by position.
        return OrderKey::FromInfinity(other.value().unwrap());
    }
    let kv = k.value().unwrap();
    if other.is_infinite() {
        OrderKey::Infinity
    } else {
        let ov = other.value().unwrap();
        if ov > kv {
            OrderKey::AboveFinite(ov)
        } else {
            OrderKey::BelowFinite(ov)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::samples::*;
    use num_traits::One;

    fn unit_region() -> Region {
        Region::new(Rat::zero(), Rat::one(), Rat::new(1, 2), Rat::from_integer(2)).unwrap()
    }

    #[test]
    fn torus_patch_faces_are_triangles() {
        let t = torus();
        let patch = faces_in_region(&t, &unit_region());
        let complete: Vec<&Face> = patch.faces.iter().filter(|f| f.complete).collect();
        assert!(!complete.is_empty(), "the unit region sees at least one full tile");
        for f in &complete {
            assert_eq!(f.side_count, 3, "{:?}", f);
            assert_eq!(f.ideal_vertices.len(), 3);
            assert!(f.interior_vertices.is_empty());
            let area = f.area.unwrap();
            assert!((area - std::f64::consts::PI).abs() < 1e-9);
        }
    }

    #[test]
    fn torus_faces_cover_sample_points() {
        // Points sampled in the region lie in the closure of some face:
        // combinatorial check via the located triangle's sides.
        let t = torus();
        let patch = faces_in_region(&t, &unit_region());
        assert!(patch.faces.len() >= 2);
        // Euler check on the compactified arrangement: V - E + F = 2.
        let geodesics = patch.geodesics.clone();
        let arr = Arrangement::build(&geodesics);
        let v = arr.verts.len() + arr.ideal.len();
        let e = arr.edges.len();
        let f = {
            let mut ids = std::collections::BTreeSet::new();
            let mut face_of = vec![usize::MAX; arr.next.len()];
            let mut count = 0;
            for start in 0..arr.next.len() {
                if face_of[start] != usize::MAX {
                    continue;
                }
                let mut cur = start;
                loop {
                    face_of[cur] = count;
                    cur = arr.next[cur];
                    if cur == start {
                        break;
                    }
                }
                ids.insert(count);
                count += 1;
            }
            count
        };
        assert_eq!(v as i64 - e as i64 + f as i64, 2, "v={} e={} f={}", v, e, f);
    }

    #[test]
    fn w4_patch_is_not_farey() {
        let o = w4();
        let region = Region::new(
            Rat::zero(),
            Rat::one(),
            Rat::new(1, 4),
            Rat::from_integer(2),
        )
        .unwrap();
        let patch = faces_in_region(&o, &region);
        for f in patch.faces.iter().filter(|f| f.complete) {
            let area = f.area.unwrap();
            assert!(area <= std::f64::consts::PI + 1e-9);
        }
        // The family differs from the torus family on this region.
        let t = torus();
        let torus_geos: Vec<Geodesic> =
            super::super::geodesics_in_region(&t, &region).into_keys().collect();
        assert_ne!(patch.geodesics, torus_geos);
    }
}
