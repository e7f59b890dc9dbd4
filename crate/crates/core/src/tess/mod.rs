//! The hyperbolic side of the construction: the family of geodesics cut
//! out by embedded triangles, point location, the tessellation patch
//! over a region, and rendering.
//!
//! All boundary data are rational in the half-plane chart; arrangement
//! vertices live in a quadratic extension handled exactly. Floating
//! point appears only in reported areas and drawings.

pub mod arr;
pub mod render;

use crate::geom::{oriented_rays, trace_sc, OrientedSc};
use crate::origami::Origami;
use crate::slope::{det2, Rat, Slope};
use crate::triangle::{embed_check, EmbeddedTriangle, IdealTriangle};
use crate::veech::reference_domain;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// A rectangle `[x0, x1] x [y0, y1]` in the upper half plane.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Region {
    pub x0: Rat,
    pub x1: Rat,
    pub y0: Rat,
    pub y1: Rat,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("region must satisfy x0 < x1 and 0 < y0 < y1")]
    DegenerateRegion,
}

impl Region {
    pub fn new(x0: Rat, x1: Rat, y0: Rat, y1: Rat) -> Result<Region, RegionError> {
        if x0 >= x1 || !y0.is_positive() || y0 >= y1 {
            return Err(RegionError::DegenerateRegion);
        }
        Ok(Region { x0, x1, y0, y1 })
    }
}

/// A complete geodesic of the upper half plane with rational endpoints,
/// stored as an unordered slope pair.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Geodesic {
    pub a: Slope,
    pub b: Slope,
}

impl Geodesic {
    pub fn new(a: Slope, b: Slope) -> Geodesic {
        assert_ne!(a, b);
        if a <= b {
            Geodesic { a, b }
        } else {
            Geodesic { a: b, b: a }
        }
    }

    /// Half-plane shape: a vertical line or a half circle.
    pub fn shape(&self) -> Shape {
        if self.b.is_infinite() {
            Shape::Vertical { x: self.a.value().unwrap() }
        } else {
            let u = self.a.value().unwrap();
            let v = self.b.value().unwrap();
            let c = (u + v) / Rat::from_integer(2);
            let r = (v - u) / Rat::from_integer(2);
            Shape::Arc { c, r: r.abs() }
        }
    }

    /// Exact test: does the geodesic meet the closed rectangle?
    pub fn meets(&self, region: &Region) -> bool {
        match self.shape() {
            Shape::Vertical { x } => x >= region.x0 && x <= region.x1,
            Shape::Arc { c, r } => {
                let lo = region.x0.max(c - r);
                let hi = region.x1.min(c + r);
                if lo > hi {
                    return false;
                }
                // y^2 over the window [lo, hi]: r^2 - (x - c)^2.
                let d_lo = lo - c;
                let d_hi = hi - c;
                let max_d2 = (d_lo * d_lo).max(d_hi * d_hi);
                let min_d2 = if d_lo.is_negative() && d_hi.is_positive() {
                    Rat::zero()
                } else {
                    (d_lo * d_lo).min(d_hi * d_hi)
                };
                let y2_max = r * r - min_d2;
                let y2_min = r * r - max_d2;
                y2_max >= region.y0 * region.y0 && y2_min <= region.y1 * region.y1
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Shape {
    Vertical { x: Rat },
    Arc { c: Rat, r: Rat },
}

/// Searches for an embedded triangle with sides in the two given
/// directions, certifying that the geodesic joining them belongs to
/// the tessellation family.
pub fn witness_geodesic(o: &Origami, k1: Slope, k2: Slope) -> Option<EmbeddedTriangle> {
    if k1 == k2 {
        return None;
    }
    let p1 = k1.primitive();
    let p2 = k2.primitive();
    let d12 = det2(p1, p2).abs();
    let max_prod = 2 * o.num_squares() as i64;
    if d12 > max_prod {
        return None;
    }
    let bound = max_prod / d12;
    let sides1 = directed_connections(o, p1, bound);
    let sides2 = directed_connections(o, p2, bound);
    for a in &sides1 {
        for b in &sides2 {
            if o.class_of(a.start) != o.class_of(b.start) {
                continue;
            }
            if a.mult * b.mult * d12 > max_prod {
                continue;
            }
            if let Ok(t) = embed_check(o, a, b) {
                return Some(t);
            }
        }
    }
    None
}

fn directed_connections(o: &Origami, p: (i64, i64), max_mult: i64) -> Vec<OrientedSc> {
    let mut v = oriented_rays(o, p);
    v.extend(oriented_rays(o, (-p.0, -p.1)));
    v.retain(|sc| sc.mult <= max_mult);
    v
}

/// All geodesics of the family meeting the region, each certified by an
/// embedding witness. The search is finite: a witnessing triangle
/// bounds the primitive determinant of the endpoint pair by `2n`, the
/// chord must reach the region's height, and one endpoint must lie
/// within the region's horizontal reach.
pub fn geodesics_in_region(
    o: &Origami,
    region: &Region,
) -> BTreeMap<Geodesic, EmbeddedTriangle> {
    let n = o.num_squares() as i64;
    let mut out: BTreeMap<Geodesic, EmbeddedTriangle> = BTreeMap::new();
    let try_pair = |k1: Slope, k2: Slope, out: &mut BTreeMap<Geodesic, EmbeddedTriangle>| {
        if k1 == k2 {
            return;
        }
        let g = Geodesic::new(k1, k2);
        if out.contains_key(&g) || !g.meets(region) {
            return;
        }
        if let Some(w) = witness_geodesic(o, k1, k2) {
            out.insert(g, w);
        }
    };

    // Vertical geodesics: pairs (inf, x/y) with y <= 2n and the line in
    // the x-window.
    for y in 1..=(2 * n) {
        let x_lo = (region.x0 * Rat::from_integer(y)).ceil().to_integer();
        let x_hi = (region.x1 * Rat::from_integer(y)).floor().to_integer();
        for x in x_lo..=x_hi {
            if num_integer::gcd(x, y) != 1 {
                continue;
            }
            try_pair(Slope::INFINITY, Slope { x, y }, &mut out);
        }
    }

    // Arc geodesics: one endpoint within horizontal reach h1 of the
    // window, denominators bounded by y1 y2 <= n / y0, determinant of
    // the endpoint pair bounded by 2n.
    let reach_lo = region.x0 - region.y1;
    let reach_hi = region.x1 + region.y1;
    let y_prod_max = (Rat::from_integer(n) / region.y0).floor().to_integer();
    for y1 in 1..=y_prod_max {
        let x1_lo = (reach_lo * Rat::from_integer(y1)).ceil().to_integer();
        let x1_hi = (reach_hi * Rat::from_integer(y1)).floor().to_integer();
        for x1 in x1_lo..=x1_hi {
            if num_integer::gcd(x1, y1) != 1 {
                continue;
            }
            let k1 = Slope { x: x1, y: y1 };
            let y2_max = y_prod_max / y1;
            for y2 in 1..=y2_max {
                // |x1 y2 - x2 y1| <= 2n.
                let center = x1 * y2;
                let lo = div_ceil(center - 2 * n, y1);
                let hi = div_floor(center + 2 * n, y1);
                for x2 in lo..=hi {
                    if num_integer::gcd(x2, y2) != 1 {
                        continue;
                    }
                    try_pair(k1, Slope { x: x2, y: y2 }, &mut out);
                }
            }
        }
    }
    out
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// Outcome of locating a point of the upper half plane.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Location {
    /// The point lies in the interior of this ideal triangle.
    Interior(IdealTriangle),
    /// The point lies on the common side of these two triangles.
    OnEdge(IdealTriangle, IdealTriangle, Geodesic),
}

/// Locates a rational point `x + iy`, `y > 0`, inside the triangle
/// family: either inside one ideal triangle, or on the shared diagonal
/// of two. The construction follows the covering argument: develop a
/// shortest connection for the point's quadratic form; either a
/// transverse separatrix spans a triangle over it, or it crosses a
/// cylinder and the two cylinder triangles contain the point on their
/// common side.
pub fn locate(o: &Origami, x: Rat, y: Rat) -> Location {
    assert!(y.is_positive(), "the point must be in the upper half plane");
    // Quadratic form of the point: Q(p, q) = ((p - x q)^2 + y^2 q^2)/y.
    let q_form = |v: (i64, i64)| -> Rat {
        let p = Rat::from_integer(v.0);
        let q = Rat::from_integer(v.1);
        let a = p - x * q;
        (a * a + y * y * q * q) / y
    };
    // Shortest saddle connection for the form, by bounded enumeration:
    // any v with Q(v) < Q0 has |v|^2 <= Q0 * trace(form).
    let trace = (Rat::one() + x * x + y * y) / y;
    let mut l2 = 4i64;
    let best = loop {
        let scs = crate::geom::saddle_connections_up_to(o, l2);
        let best = scs
            .iter()
            .map(|sc| (q_form(sc.fwd.holonomy()), sc.fwd.clone()))
            .min_by(|a, b| (a.0, a.1.key()).cmp(&(b.0, b.1.key())));
        if let Some((q0, sc)) = best {
            let needed = (q0 * trace).ceil().to_integer();
            if l2 >= needed {
                break sc;
            }
            l2 = needed;
        } else {
            l2 *= 2;
        }
    };
    // Direction perpendicular to it in the point's metric.
    let m_d = {
        // M = (1/y) [[1, -x], [-x, x^2 + y^2]] applied to the direction.
        let (p, q) = (Rat::from_integer(best.dir.0), Rat::from_integer(best.dir.1));
        (p - x * q, -x * p + (x * x + y * y) * q)
    };
    let perp = {
        let (a, b) = (-m_d.1, m_d.0);
        let (an, ad) = (*a.numer(), *a.denom());
        let (bn, bd) = (*b.numer(), *b.denom());
        let nx = an * bd;
        let ny = bn * ad;
        let g = nx.gcd(&ny);
        let mut u = (nx / g, ny / g);
        if det2(best.dir, u) < 0 {
            u = (-u.0, -u.1);
        }
        u
    };

    if let Some(tri) = crate::graph::minimal_transverse_triangle(o, &best, perp) {
        let ideal = tri.ideal();
        debug_assert!(point_strictly_inside(&ideal, x, y), "located triangle contains the point");
        return Location::Interior(ideal);
    }

    // The connection crosses a cylinder in the perpendicular direction:
    // the two triangles leaning on the cylinder boundary share the
    // diagonal through the point.
    let ell = best.mult;
    let d0 = best.dir;
    debug_assert!(det2(d0, perp) > 0);
    let s_up = crate::geom::ray_rotated_onto(o, best.start, d0, perp);
    let up1 = trace_sc(o, s_up, perp);
    let s_up2 = crate::geom::ray_rotated_onto_cw(o, best.end, (-d0.0, -d0.1), perp);
    let up2 = trace_sc(o, s_up2, perp);
    let t2 = up2.mult;

    // Triangle 1: spanned by (ell d0, t1 perp); triangle 2: spanned by
    // (ell d0, ell d0 + t2 perp).
    let tri1 = embed_check(o, &best, &up1).expect("cylinder triangle embeds");
    let v2 = (ell * d0.0 + t2 * perp.0, ell * d0.1 + t2 * perp.1);
    let g2 = v2.0.gcd(&v2.1);
    let sec2 = crate::geom::ray_rotated_onto(o, best.start, d0, (v2.0 / g2, v2.1 / g2));
    let sc2 = trace_sc(o, sec2, (v2.0 / g2, v2.1 / g2));
    debug_assert_eq!(sc2.holonomy(), v2);
    let tri2 = embed_check(o, &best, &sc2).expect("cylinder triangle embeds");

    let diag = Geodesic::new(best.slope(), Slope::of_vector(perp.0, perp.1));
    debug_assert!(point_on_geodesic(&diag, x, y), "the point lies on the shared diagonal");
    Location::OnEdge(tri2.ideal(), tri1.ideal(), diag)
}

/// Is the point strictly inside the ideal triangle? For each side, the
/// point must lie strictly on the same side as the opposite vertex.
pub fn point_strictly_inside(t: &IdealTriangle, x: Rat, y: Rat) -> bool {
    let s = t.slopes;
    for i in 0..3 {
        let g = Geodesic::new(s[i], s[(i + 1) % 3]);
        let here = side_of_geodesic(&g, x, y);
        let opposite = boundary_side(&g, s[(i + 2) % 3]);
        debug_assert!(opposite != 0);
        if here == 0 || here != opposite {
            return false;
        }
    }
    true
}

/// Sign of the point relative to a geodesic: 0 on it, +1 on the
/// side of larger x (vertical) or outside the circle (arc).
pub fn side_of_geodesic(g: &Geodesic, x: Rat, y: Rat) -> i8 {
    match g.shape() {
        Shape::Vertical { x: v } => {
            if x == v {
                0
            } else if x > v {
                1
            } else {
                -1
            }
        }
        Shape::Arc { c, r } => {
            let d = (x - c) * (x - c) + y * y - r * r;
            if d.is_zero() {
                0
            } else if d.is_positive() {
                1
            } else {
                -1
            }
        }
    }
}

/// Side of a boundary point relative to a geodesic (never on it for a
/// vertex of an ideal triangle opposite the side).
pub fn boundary_side(g: &Geodesic, k: Slope) -> i8 {
    match g.shape() {
        Shape::Vertical { x: v } => {
            if k.is_infinite() {
                0
            } else {
                let kv = k.value().unwrap();
                if kv > v {
                    1
                } else if kv < v {
                    -1
                } else {
                    0
                }
            }
        }
        Shape::Arc { c, r } => {
            if k.is_infinite() {
                1
            } else {
                let kv = k.value().unwrap();
                let d = (kv - c) * (kv - c) - r * r;
                if d.is_zero() {
                    0
                } else if d.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

pub fn point_on_geodesic(g: &Geodesic, x: Rat, y: Rat) -> bool {
    side_of_geodesic(g, x, y) == 0
}

/// The family of vertical positions of geodesics sharing the ideal
/// point `k`, described in the chart sending `k` to the horizontal:
/// base offsets modulo the period.
pub struct CuspPencil {
    pub chart: crate::matrix::Sl2,
    pub period: i64,
    pub offsets: Vec<Rat>,
}

pub fn cusp_pencil(o: &Origami, k: Slope) -> CuspPencil {
    let cd = reference_domain(o, k);
    let mut offsets: Vec<Rat> = cd
        .neighbors
        .iter()
        .map(|s| cd.chart.apply_slope(*s))
        .filter(|s| !s.is_infinite())
        .map(|s| s.value().unwrap())
        .map(|v| {
            let p = Rat::from_integer(cd.period);
            let f = (v / p).floor();
            v - f * p
        })
        .collect();
    offsets.sort();
    offsets.dedup();
    CuspPencil { chart: cd.chart, period: cd.period, offsets }
}

impl CuspPencil {
    /// Is some geodesic of the pencil strictly inside the open chart
    /// interval `(lo, hi)`?
    pub fn meets_open_interval(&self, lo: Rat, hi: Rat) -> bool {
        let p = Rat::from_integer(self.period);
        for &v in &self.offsets {
            // v + j p in (lo, hi) for some integer j.
            let j_lo = ((lo - v) / p).floor().to_integer();
            for j in j_lo..=j_lo + ((hi - lo) / p).ceil().to_integer() + 1 {
                let val = v + Rat::from_integer(j) * p;
                if val > lo && val < hi {
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::samples::*;

    fn region_unit() -> Region {
        Region::new(
            Rat::zero(),
            Rat::one(),
            Rat::new(1, 2),
            Rat::from_integer(2),
        )
        .unwrap()
    }

    #[test]
    fn farey_edges_in_the_unit_region() {
        let t = torus();
        let g = geodesics_in_region(&t, &region_unit());
        // Every returned endpoint pair has determinant +-1.
        for geo in g.keys() {
            let d = det2(geo.a.primitive(), geo.b.primitive()).abs();
            assert_eq!(d, 1, "{:?}", geo);
        }
        // Exactly the two verticals and the unit arc meet this region
        // (the arc over (0, 1) touches its bottom edge).
        let keys: Vec<Geodesic> = g.into_keys().collect();
        assert_eq!(
            keys,
            vec![
                Geodesic::new(Slope::ZERO, Slope::of_vector(1, 1)),
                Geodesic::new(Slope::ZERO, Slope::INFINITY),
                Geodesic::new(Slope::of_vector(1, 1), Slope::INFINITY),
            ]
        );
    }

    #[test]
    fn deeper_farey_edges_in_a_lower_region() {
        let t = torus();
        let r = Region::new(Rat::zero(), Rat::one(), Rat::new(1, 5), Rat::from_integer(2)).unwrap();
        let g = geodesics_in_region(&t, &r);
        assert!(g.contains_key(&Geodesic::new(Slope::of_vector(1, 2), Slope::of_vector(1, 1))));
        assert!(g.contains_key(&Geodesic::new(Slope::ZERO, Slope::of_vector(1, 2))));
        for geo in g.keys() {
            assert_eq!(det2(geo.a.primitive(), geo.b.primitive()).abs(), 1);
        }
    }

    #[test]
    fn l3_matches_the_torus_family() {
        let t = torus();
        let o = l3();
        let r = region_unit();
        let gt: Vec<Geodesic> = geodesics_in_region(&t, &r).into_keys().collect();
        let go: Vec<Geodesic> = geodesics_in_region(&o, &r).into_keys().collect();
        assert_eq!(gt, go);
    }

    #[test]
    fn locate_interior_point() {
        let t = torus();
        match locate(&t, Rat::new(1, 2), Rat::one()) {
            Location::Interior(tri) => {
                assert_eq!(
                    tri,
                    IdealTriangle::new(Slope::INFINITY, Slope::ZERO, Slope::of_vector(1, 1))
                );
            }
            other => panic!("expected interior location, got {:?}", other),
        }
    }

    #[test]
    fn locate_point_on_an_edge() {
        let t = torus();
        match locate(&t, Rat::zero(), Rat::one()) {
            Location::OnEdge(t1, t2, g) => {
                assert_eq!(g, Geodesic::new(Slope::ZERO, Slope::INFINITY));
                let expect1 =
                    IdealTriangle::new(Slope::INFINITY, Slope::ZERO, Slope::of_vector(1, 1));
                let expect2 =
                    IdealTriangle::new(Slope::INFINITY, Slope::ZERO, Slope::of_vector(-1, 1));
                assert!(
                    (t1 == expect1 && t2 == expect2) || (t1 == expect2 && t2 == expect1),
                    "{:?} {:?}",
                    t1,
                    t2
                );
            }
            other => panic!("expected edge location, got {:?}", other),
        }
    }

    #[test]
    fn locate_translated_point() {
        let t = torus();
        match locate(&t, Rat::from_integer(2), Rat::one()) {
            Location::Interior(tri) => {
                assert!(tri.has_vertex(Slope::of_vector(2, 1)) || tri.has_vertex(Slope::of_vector(3, 1)));
            }
            Location::OnEdge(_, _, g) => {
                assert!(g.a == Slope::of_vector(2, 1) || g.b == Slope::of_vector(2, 1));
            }
        }
    }

    #[test]
    fn pencil_of_the_horizontal_cusp() {
        let t = torus();
        let p = cusp_pencil(&t, Slope::INFINITY);
        assert_eq!(p.period, 1);
        assert_eq!(p.offsets, vec![Rat::zero()]);
        assert!(p.meets_open_interval(Rat::new(1, 2), Rat::new(3, 2)));
        assert!(!p.meets_open_interval(Rat::new(1, 3), Rat::new(2, 3)));
    }
}
