//! Exact geodesic tracing on the square grid: the ray walker, saddle
//! connections, cylinder decompositions in rational directions, and
//! intersection counts.
//!
//! All positions are rationals; lattice points are hit exactly, so no
//! predicate ever depends on floating point.

use crate::origami::{Corner, Origami, Sector};
use crate::slope::{det2, norm2, quadrant, Rat, Slope};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Edge of a unit square through which a segment enters it.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Edge {
    Bottom,
    Right,
    Top,
    Left,
}

/// One crossing of a trace: the square entered, through which edge, and
/// the exact coordinate along that edge.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceStep {
    pub square: usize,
    pub edge: Edge,
    pub coord: Rat,
}

/// What the walker runs into next.
#[derive(Clone, Debug)]
pub enum WalkEvent {
    /// Entered a neighboring square through the interior of an edge.
    Edge(TraceStep),
    /// Arrived exactly at a lattice point; `corner` is the corner of the
    /// square just traversed, `class` its vertex class.
    Vertex { square: usize, corner: Corner, class: usize },
}

/// Exact straight-line walker across the square complex.
pub struct Walker<'a> {
    o: &'a Origami,
    pub sq: usize,
    pub x: Rat,
    pub y: Rat,
    pub dx: i64,
    pub dy: i64,
    /// Accumulated parameter: the current point is `start + t * dir`.
    pub t: Rat,
}

impl<'a> Walker<'a> {
    /// Starts at the vertex of `sector`, heading into direction `dir`.
    /// The sector must own the direction's quadrant.
    pub fn from_sector(o: &'a Origami, sector: Sector, dir: (i64, i64)) -> Walker<'a> {
        assert!(
            sector_owns(sector, dir),
            "sector {:?} does not own direction {:?}",
            sector,
            dir
        );
        let (px, py) = sector.corner.position();
        let mut w = Walker {
            o,
            sq: sector.square,
            x: Rat::from_integer(px),
            y: Rat::from_integer(py),
            dx: dir.0,
            dy: dir.1,
            t: Rat::zero(),
        };
        w.normalize();
        w
    }

    /// Starts at an interior or edge point of a square.
    pub fn at_point(o: &'a Origami, sq: usize, pos: (Rat, Rat), dir: (i64, i64)) -> Walker<'a> {
        let mut w = Walker { o, sq, x: pos.0, y: pos.1, dx: dir.0, dy: dir.1, t: Rat::zero() };
        w.normalize();
        w
    }

    /// Keeps points on grid lines in the square the motion belongs to:
    /// `x = 1` moving right or along becomes `x = 0` of the right
    /// neighbor, and so on.
    fn normalize(&mut self) {
        if self.x.is_one() && self.dx >= 0 {
            self.sq = self.o.right(self.sq);
            self.x = Rat::zero();
        } else if self.x.is_zero() && self.dx < 0 {
            self.sq = self.o.left(self.sq);
            self.x = Rat::one();
        }
        if self.y.is_one() && self.dy >= 0 {
            self.sq = self.o.above(self.sq);
            self.y = Rat::zero();
        } else if self.y.is_zero() && self.dy < 0 && !self.x.is_zero() && !self.x.is_one() {
            self.sq = self.o.below(self.sq);
            self.y = Rat::one();
        }
    }

    pub fn position(&self) -> (usize, Rat, Rat) {
        (self.sq, self.x, self.y)
    }

    /// Advances to the next edge crossing or lattice point.
    pub fn step(&mut self) -> WalkEvent {
        let tx = match self.dx.signum() {
            1 => Some((Rat::one() - self.x) / Rat::from_integer(self.dx)),
            -1 => Some(self.x / Rat::from_integer(-self.dx)),
            _ => None,
        };
        let ty = match self.dy.signum() {
            1 => Some((Rat::one() - self.y) / Rat::from_integer(self.dy)),
            -1 => Some(self.y / Rat::from_integer(-self.dy)),
            _ => None,
        };
        let dt = match (tx, ty) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("zero direction"),
        };
        debug_assert!(dt.is_positive(), "walker stalled");
        self.x += dt * Rat::from_integer(self.dx);
        self.y += dt * Rat::from_integer(self.dy);
        self.t += dt;
        let on_x = self.x.is_zero() || self.x.is_one();
        let on_y = self.y.is_zero() || self.y.is_one();
        if on_x && on_y {
            let corner = match (self.x.is_one(), self.y.is_one()) {
                (false, false) => Corner::Sw,
                (true, false) => Corner::Se,
                (true, true) => Corner::Ne,
                (false, true) => Corner::Nw,
            };
            let class = self.o.class_of(Sector::new(self.sq, corner));
            return WalkEvent::Vertex { square: self.sq, corner, class };
        }
        // A single wall was crossed.
        let step = if self.x.is_one() && self.dx > 0 {
            self.sq = self.o.right(self.sq);
            self.x = Rat::zero();
            TraceStep { square: self.sq, edge: Edge::Left, coord: self.y }
        } else if self.x.is_zero() && self.dx < 0 {
            self.sq = self.o.left(self.sq);
            self.x = Rat::one();
            TraceStep { square: self.sq, edge: Edge::Right, coord: self.y }
        } else if self.y.is_one() && self.dy > 0 {
            self.sq = self.o.above(self.sq);
            self.y = Rat::zero();
            TraceStep { square: self.sq, edge: Edge::Bottom, coord: self.x }
        } else {
            debug_assert!(self.y.is_zero() && self.dy < 0);
            self.sq = self.o.below(self.sq);
            self.y = Rat::one();
            TraceStep { square: self.sq, edge: Edge::Top, coord: self.x }
        };
        WalkEvent::Edge(step)
    }

    /// Continues straight through a regular lattice point just reported
    /// by [`Walker::step`].
    pub fn continue_through_vertex(&mut self) {
        let o = self.o;
        let (sq2, pos) = match (self.dx.signum(), self.dy.signum()) {
            (1, 1) => {
                debug_assert_eq!(o.above(o.right(self.sq)), o.right(o.above(self.sq)));
                (o.above(o.right(self.sq)), (0, 0))
            }
            (-1, 1) => {
                debug_assert_eq!(o.above(o.left(self.sq)), o.left(o.above(self.sq)));
                (o.above(o.left(self.sq)), (1, 0))
            }
            (-1, -1) => {
                debug_assert_eq!(o.below(o.left(self.sq)), o.left(o.below(self.sq)));
                (o.below(o.left(self.sq)), (1, 1))
            }
            (1, -1) => {
                debug_assert_eq!(o.below(o.right(self.sq)), o.right(o.below(self.sq)));
                (o.below(o.right(self.sq)), (0, 1))
            }
            (1, 0) => (o.right(self.sq), (0, 0)),
            (-1, 0) => (o.left(self.sq), (1, 0)),
            (0, 1) => (o.above(self.sq), (0, 0)),
            (0, -1) => (o.below(self.sq), (0, 1)),
            _ => unreachable!(),
        };
        self.sq = sq2;
        self.x = Rat::from_integer(pos.0);
        self.y = Rat::from_integer(pos.1);
    }

    /// The sector at a just-reported lattice point from which the
    /// reversed ray `-dir` emanates.
    pub fn reversal_sector(&self, corner: Corner) -> Sector {
        let o = self.o;
        let s = Sector::new(self.sq, corner);
        match (self.dx.signum(), self.dy.signum()) {
            (1, 1) | (-1, 1) | (-1, -1) | (1, -1) => s,
            (1, 0) => o.rotate_ccw(s),  // arrived at Se along the bottom edge
            (-1, 0) => s,               // arrived at Sw
            (0, 1) => s,                // arrived at Nw along the left edge
            (0, -1) => o.rotate_ccw(s), // arrived at Sw going down
            _ => unreachable!(),
        }
    }
}

#[inline]
fn sector_owns(s: Sector, dir: (i64, i64)) -> bool {
    s.corner.index() as u8 == quadrant(dir.0, dir.1)
}

/// Rotates a ray at a vertex by a counterclockwise quarter turn. Rays
/// are (sector, direction) pairs with the sector owning the direction.
pub fn rotate_ray_ccw(o: &Origami, s: Sector, dir: (i64, i64)) -> (Sector, (i64, i64)) {
    debug_assert!(sector_owns(s, dir));
    (o.rotate_ccw(s), (-dir.1, dir.0))
}

pub fn rotate_ray_cw(o: &Origami, s: Sector, dir: (i64, i64)) -> (Sector, (i64, i64)) {
    debug_assert!(sector_owns(s, dir));
    (o.rotate_cw(s), (dir.1, -dir.0))
}

/// The sector of the ray reached from `(s, from)` by rotating
/// counterclockwise onto direction `to`, where the rotation angle is in
/// `[0, pi)`.
pub fn ray_rotated_onto(o: &Origami, s: Sector, from: (i64, i64), to: (i64, i64)) -> Sector {
    debug_assert!(sector_owns(s, from));
    debug_assert!(
        det2(from, to) > 0 || (det2(from, to) == 0 && (from.0 * to.0 + from.1 * to.1) > 0),
        "rotation from {:?} to {:?} must be counterclockwise below a half turn",
        from,
        to
    );
    let steps = (quadrant(to.0, to.1) + 4 - quadrant(from.0, from.1)) % 4;
    let mut cur = s;
    for _ in 0..steps {
        cur = o.rotate_ccw(cur);
    }
    debug_assert!(sector_owns(cur, to));
    cur
}

/// Clockwise counterpart of [`ray_rotated_onto`]: the rotation angle
/// from `from` back to `to` is in `[0, pi)`.
pub fn ray_rotated_onto_cw(o: &Origami, s: Sector, from: (i64, i64), to: (i64, i64)) -> Sector {
    debug_assert!(sector_owns(s, from));
    debug_assert!(
        det2(from, to) < 0 || (det2(from, to) == 0 && (from.0 * to.0 + from.1 * to.1) > 0),
        "rotation from {:?} to {:?} must be clockwise below a half turn",
        from,
        to
    );
    let steps = (quadrant(from.0, from.1) + 4 - quadrant(to.0, to.1)) % 4;
    let mut cur = s;
    for _ in 0..steps {
        cur = o.rotate_cw(cur);
    }
    debug_assert!(sector_owns(cur, to));
    cur
}

/// Exit point of the walker's last crossing, in the coordinates of the
/// square it just left.
pub fn walker_exit_point(w: &Walker) -> (Rat, Rat) {
    exit_point(w)
}

/// Result of following a ray from a marked point.
#[derive(Clone, Debug)]
pub enum RayReport {
    /// First marked point on the ray, reached after `mult` copies of the
    /// primitive direction, with the sector of the reversed ray there.
    Hit { class: usize, mult: i64, end: Sector, trace: Vec<TraceStep> },
    NoHitWithinBound { trace: Vec<TraceStep> },
}

/// Follows the ray from `sector` in primitive direction `dir` until the
/// first marked point, or reports that none occurs within squared
/// length `max_len2`.
pub fn trace_ray(o: &Origami, sector: Sector, dir: (i64, i64), max_len2: &Rat) -> RayReport {
    debug_assert!(o.is_marked(sector), "rays are traced from marked points");
    let n2 = Rat::from_integer(norm2(dir.0, dir.1));
    let mut w = Walker::from_sector(o, sector, dir);
    let mut trace = Vec::new();
    let mut guard = 0i64;
    loop {
        guard += 1;
        assert!(guard < 1 << 40, "ray walk exceeded step budget");
        match w.step() {
            WalkEvent::Edge(step) => trace.push(step),
            WalkEvent::Vertex { square: _, corner, class } => {
                debug_assert!(w.t.is_integer());
                if &(w.t * w.t * n2) > max_len2 {
                    return RayReport::NoHitWithinBound { trace };
                }
                if o.vertex_classes()[class].marked {
                    return RayReport::Hit {
                        class,
                        mult: *w.t.numer(),
                        end: w.reversal_sector(corner),
                        trace,
                    };
                }
                w.continue_through_vertex();
            }
        }
    }
}

/// An oriented saddle connection: the geodesic segment from the vertex
/// of `start` in direction `dir` to the first marked point, with
/// holonomy `mult * dir`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OrientedSc {
    pub start: Sector,
    /// Primitive direction vector.
    pub dir: (i64, i64),
    /// The holonomy is `mult * dir`.
    pub mult: i64,
    /// Sector of the reversed segment at the far endpoint.
    pub end: Sector,
    pub trace: Vec<TraceStep>,
}

impl OrientedSc {
    pub fn holonomy(&self) -> (i64, i64) {
        (self.mult * self.dir.0, self.mult * self.dir.1)
    }

    pub fn len2(&self) -> i64 {
        self.mult * self.mult * norm2(self.dir.0, self.dir.1)
    }

    pub fn slope(&self) -> Slope {
        Slope::of_vector(self.dir.0, self.dir.1)
    }

    pub fn start_class(&self, o: &Origami) -> usize {
        o.class_of(self.start)
    }

    pub fn end_class(&self, o: &Origami) -> usize {
        o.class_of(self.end)
    }

    /// The same segment traversed backwards.
    pub fn reversed(&self, o: &Origami) -> OrientedSc {
        let r = trace_sc(o, self.end, (-self.dir.0, -self.dir.1));
        debug_assert_eq!(r.mult, self.mult);
        debug_assert_eq!(r.end, self.start);
        r
    }

    pub fn key(&self) -> (usize, i64, i64) {
        (self.start.square * 4 + self.start.corner.index(), self.dir.0, self.dir.1)
    }

    /// Key of the reversed representative.
    pub fn rev_key(&self) -> (usize, i64, i64) {
        (self.end.square * 4 + self.end.corner.index(), -self.dir.0, -self.dir.1)
    }

    /// Per-square pieces of the segment, for exact overlay tests.
    pub fn pieces(&self, o: &Origami) -> Vec<(usize, (Rat, Rat), (Rat, Rat))> {
        let mut w = Walker::from_sector(o, self.start, self.dir);
        let mut out = Vec::new();
        let mut cur_sq = w.sq;
        let mut cur_from = (w.x, w.y);
        loop {
            match w.step() {
                WalkEvent::Edge(_) => {
                    let exit = exit_point(&w);
                    out.push((cur_sq, cur_from, exit));
                    cur_sq = w.sq;
                    cur_from = (w.x, w.y);
                }
                WalkEvent::Vertex { square: _, corner, class } => {
                    let pos = corner.position();
                    out.push((
                        cur_sq,
                        cur_from,
                        (Rat::from_integer(pos.0), Rat::from_integer(pos.1)),
                    ));
                    if w.t == Rat::from_integer(self.mult) {
                        debug_assert!(o.vertex_classes()[class].marked);
                        return out;
                    }
                    w.continue_through_vertex();
                    cur_sq = w.sq;
                    cur_from = (w.x, w.y);
                }
            }
        }
    }
}

fn exit_point(w: &Walker) -> (Rat, Rat) {
    // The walker has just crossed into a new square; the exit point in
    // the old square has the crossed coordinate flipped back.
    let x = if w.x.is_zero() && w.dx > 0 {
        Rat::one()
    } else if w.x.is_one() && w.dx < 0 {
        Rat::zero()
    } else {
        w.x
    };
    let y = if w.y.is_zero() && w.dy > 0 {
        Rat::one()
    } else if w.y.is_one() && w.dy < 0 {
        Rat::zero()
    } else {
        w.y
    };
    (x, y)
}

/// Traces the saddle connection leaving `sector` in direction `dir`.
/// Every ray on a square-tiled surface reaches a marked point: the walk
/// through lattice points is reversible, so it must return to its
/// (marked) start if it meets nothing else.
pub fn trace_sc(o: &Origami, sector: Sector, dir: (i64, i64)) -> OrientedSc {
    let bound = Rat::from_integer(i64::MAX / 8);
    match trace_ray(o, sector, dir, &bound) {
        RayReport::Hit { mult, end, trace, .. } => {
            OrientedSc { start: sector, dir, mult, end, trace }
        }
        RayReport::NoHitWithinBound { .. } => unreachable!("rays always reach a marked point"),
    }
}

/// All saddle connections oriented along the primitive direction `dir`,
/// one per ray, sorted by start sector.
pub fn oriented_rays(o: &Origami, dir: (i64, i64)) -> Vec<OrientedSc> {
    let q = quadrant(dir.0, dir.1);
    let mut out = Vec::new();
    for class in o.marked_classes() {
        for &s in &class.corners {
            if s.corner.index() as u8 == q {
                out.push(trace_sc(o, s, dir));
            }
        }
    }
    out.sort_by_key(|sc| sc.key());
    out
}

/// An unoriented saddle connection stored through a canonical oriented
/// representative; the set of connections is closed under reversal.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SaddleConnection {
    pub fwd: OrientedSc,
}

impl SaddleConnection {
    pub fn rev(&self, o: &Origami) -> OrientedSc {
        self.fwd.reversed(o)
    }

    /// Both holonomy vectors of the unoriented pair.
    pub fn holonomies(&self) -> [(i64, i64); 2] {
        let h = self.fwd.holonomy();
        [h, (-h.0, -h.1)]
    }

    pub fn len2(&self) -> i64 {
        self.fwd.len2()
    }

    pub fn slope(&self) -> Slope {
        self.fwd.slope()
    }
}

/// Exactly the saddle connections with squared length at most `l2`,
/// unoriented, canonically sorted.
pub fn saddle_connections_up_to(o: &Origami, l2: i64) -> Vec<SaddleConnection> {
    assert!(l2 >= 1);
    let mut out: Vec<SaddleConnection> = Vec::new();
    let r = (l2 as f64).sqrt() as i64 + 1;
    for p in -r..=r {
        for q in -r..=r {
            if (p, q) == (0, 0) || norm2(p, q) > l2 || num_integer::gcd(p, q) != 1 {
                continue;
            }
            for sc in oriented_rays(o, (p, q)) {
                if sc.len2() <= l2 && sc.key() <= sc.rev_key() {
                    out.push(SaddleConnection { fwd: sc });
                }
            }
        }
    }
    out.sort_by_key(|sc| {
        (sc.len2(), sc.fwd.dir, sc.fwd.start.square, sc.fwd.start.corner.index())
    });
    out
}

/// A maximal open cylinder of closed geodesics in a rational direction.
/// Lengths are counted in multiples of the primitive direction vector
/// and heights in the transverse lattice unit, so that
/// `circumference * height` is the Euclidean area in unit squares.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cylinder {
    pub direction: Slope,
    pub circumference: i64,
    pub height: i64,
    /// Indices into the decomposition's saddle connection list, in
    /// cyclic order along the boundary.
    pub boundary_bottom: Vec<usize>,
    pub boundary_top: Vec<usize>,
    /// Squares whose interior meets the open cylinder.
    pub core_squares: Vec<usize>,
}

/// The decomposition of the surface in one periodic direction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectionDecomposition {
    pub direction: Slope,
    pub cylinders: Vec<Cylinder>,
    /// All saddle connections in the direction, oriented along it.
    pub saddle_connections: Vec<OrientedSc>,
}

/// Decomposes the surface into cylinders in the direction of `k`.
/// Every rational direction on a square-tiled surface is periodic.
pub fn cylinder_decomposition(o: &Origami, k: Slope) -> DirectionDecomposition {
    let dir = k.primitive();
    let scs = oriented_rays(o, dir);
    let index_of: BTreeMap<(usize, usize), usize> = scs
        .iter()
        .enumerate()
        .map(|(i, sc)| ((sc.start.square, sc.start.corner.index()), i))
        .collect();
    let ray_index = |s: Sector| -> usize {
        *index_of
            .get(&(s.square, s.corner.index()))
            .expect("continuation ray is a saddle connection ray")
    };

    // Straight continuation along a boundary line: rotate the reversed
    // ray by a half turn through the chosen side.
    let next_keeping_left = |i: usize| -> usize {
        let sc = &scs[i];
        let (s1, d1) = rotate_ray_cw(o, sc.end, (-dir.0, -dir.1));
        let (s2, d2) = rotate_ray_cw(o, s1, d1);
        debug_assert_eq!(d2, dir);
        ray_index(s2)
    };
    let next_keeping_right = |i: usize| -> usize {
        let sc = &scs[i];
        let (s1, d1) = rotate_ray_ccw(o, sc.end, (-dir.0, -dir.1));
        let (s2, d2) = rotate_ray_ccw(o, s1, d1);
        debug_assert_eq!(d2, dir);
        ray_index(s2)
    };

    let bottom_cycles = cycles_of(scs.len(), next_keeping_left);
    let top_cycles = cycles_of(scs.len(), next_keeping_right);
    let top_cycle_of: BTreeMap<usize, usize> = top_cycles
        .iter()
        .enumerate()
        .flat_map(|(ci, cy)| cy.iter().map(move |&i| (i, ci)))
        .collect();

    let perp = (-dir.1, dir.0);
    let unit2 = norm2(dir.0, dir.1);
    let mut cylinders = Vec::new();
    let mut used_tops = vec![false; top_cycles.len()];
    for cycle in &bottom_cycles {
        let circumference: i64 = cycle.iter().map(|&i| scs[i].mult).sum();
        let a0 = &scs[cycle[0]];
        // The crossing parameter times |dir|^2 is the height in
        // transverse lattice units.
        let (h, top_idx) = cross_cylinder(o, a0, dir, perp, &scs, &ray_index);
        debug_assert!(h >= 1);
        let _ = unit2;
        let tci = top_cycle_of[&top_idx];
        debug_assert!(!used_tops[tci], "each top boundary bounds one cylinder");
        used_tops[tci] = true;
        let core = core_squares(o, a0, dir, perp, circumference, h);
        cylinders.push(Cylinder {
            direction: k,
            circumference,
            height: h,
            boundary_bottom: cycle.clone(),
            boundary_top: top_cycles[tci].clone(),
            core_squares: core,
        });
    }
    debug_assert_eq!(
        cylinders.iter().map(|c| c.circumference * c.height).sum::<i64>(),
        o.num_squares() as i64,
        "cylinder areas must add up to the surface area"
    );
    DirectionDecomposition { direction: k, cylinders, saddle_connections: scs }
}

fn cycles_of(n: usize, next: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cy = vec![start];
        seen[start] = true;
        let mut cur = next(start);
        while cur != start {
            debug_assert!(!seen[cur]);
            seen[cur] = true;
            cy.push(cur);
            cur = next(cur);
        }
        out.push(cy);
    }
    out
}

/// Walks perpendicular into the cylinder on the left of `a0` until the
/// first boundary crossing. Returns the crossing parameter scaled by
/// `|dir|^2` (an integer: the height in lattice units times `|dir|^2`)
/// and the index of a saddle connection on the top boundary.
fn cross_cylinder(
    o: &Origami,
    a0: &OrientedSc,
    dir: (i64, i64),
    perp: (i64, i64),
    scs: &[OrientedSc],
    ray_index: &dyn Fn(Sector) -> usize,
) -> (i64, usize) {
    let mut pieces: BTreeMap<usize, Vec<(usize, (Rat, Rat), (Rat, Rat))>> = BTreeMap::new();
    for (i, sc) in scs.iter().enumerate() {
        for (sq, p, q) in sc.pieces(o) {
            pieces.entry(sq).or_default().push((i, p, q));
        }
    }
    let (s_perp, d_perp) = rotate_ray_ccw(o, a0.start, dir);
    debug_assert_eq!(d_perp, perp);
    let mut w = Walker::from_sector(o, s_perp, perp);
    let mut guard = 0;
    loop {
        guard += 1;
        assert!(guard < 1 << 24, "cylinder crossing exceeded step budget");
        let from = (w.x, w.y);
        let t0 = w.t;
        let sq0 = w.sq;
        let ev = w.step();
        let to = match &ev {
            WalkEvent::Edge(_) => exit_point(&w),
            WalkEvent::Vertex { corner, .. } => {
                let p = corner.position();
                (Rat::from_integer(p.0), Rat::from_integer(p.1))
            }
        };
        let mut best: Option<(Rat, usize)> = None;
        if let Some(list) = pieces.get(&sq0) {
            for (i, p, q) in list {
                if let Some(u) = segment_cross_param(from, to, *p, *q) {
                    let t_here = t0 + u * (w.t - t0);
                    if t_here.is_positive() && best.as_ref().map_or(true, |(b, _)| t_here < *b) {
                        best = Some((t_here, *i));
                    }
                }
            }
        }
        if let Some((t_hit, i)) = best {
            let scaled = t_hit * Rat::from_integer(norm2(dir.0, dir.1));
            debug_assert!(scaled.is_integer());
            return (*scaled.numer(), i);
        }
        if let WalkEvent::Vertex { corner, class, .. } = ev {
            if o.vertex_classes()[class].marked {
                // Hit a marked point of the top boundary; follow the
                // outgoing boundary ray on the cylinder side.
                let rev = w.reversal_sector(corner);
                let (s_out, d_out) = rotate_ray_ccw(o, rev, (-perp.0, -perp.1));
                debug_assert_eq!(d_out, dir);
                let scaled = w.t * Rat::from_integer(norm2(dir.0, dir.1));
                debug_assert!(scaled.is_integer());
                return (*scaled.numer(), ray_index(s_out));
            }
            w.continue_through_vertex();
        }
    }
}

/// Intersection parameter along segment `a` of its crossing with
/// segment `b`, when the two meet in a single point (endpoints of
/// either segment included).
pub(crate) fn segment_cross_param(
    a0: (Rat, Rat),
    a1: (Rat, Rat),
    b0: (Rat, Rat),
    b1: (Rat, Rat),
) -> Option<Rat> {
    let da = (a1.0 - a0.0, a1.1 - a0.1);
    let db = (b1.0 - b0.0, b1.1 - b0.1);
    let denom = da.0 * db.1 - da.1 * db.0;
    if denom.is_zero() {
        return None; // parallel; transverse overlays never overlap
    }
    let w = (b0.0 - a0.0, b0.1 - a0.1);
    let u = (w.0 * db.1 - w.1 * db.0) / denom;
    let v = (w.0 * da.1 - w.1 * da.0) / denom;
    if u >= Rat::zero() && u <= Rat::one() && v >= Rat::zero() && v <= Rat::one() {
        Some(u)
    } else {
        None
    }
}

/// Squares met by the open cylinder: union over its rows of the squares
/// visited by the mid-height core curve. A square meets the open
/// cylinder exactly when one of these curves passes through it, because
/// lattice points sit at integer heights.
fn core_squares(
    o: &Origami,
    a0: &OrientedSc,
    dir: (i64, i64),
    perp: (i64, i64),
    circumference: i64,
    height: i64,
) -> Vec<usize> {
    let unit2 = norm2(dir.0, dir.1);
    let mut squares = std::collections::BTreeSet::new();
    for j in 0..height {
        // Launch half a primitive step along the cylinder plus
        // (j + 1/2) lattice units across, then turn into the direction.
        let d_launch =
            (unit2 * dir.0 + (2 * j + 1) * perp.0, unit2 * dir.1 + (2 * j + 1) * perp.1);
        let sector = ray_rotated_onto(o, a0.start, dir, d_launch);
        let mut w = Walker::from_sector(o, sector, d_launch);
        let target = Rat::new(1, 2 * unit2);
        loop {
            let t0 = w.t;
            let sq0 = w.sq;
            let from = (w.x, w.y);
            let ev = w.step();
            if w.t >= target {
                let dt = target - t0;
                let x = from.0 + dt * Rat::from_integer(w.dx);
                let y = from.1 + dt * Rat::from_integer(w.dy);
                w = Walker::at_point(o, sq0, (x, y), dir);
                break;
            }
            match ev {
                WalkEvent::Edge(_) => {}
                WalkEvent::Vertex { class, .. } => {
                    debug_assert!(!o.vertex_classes()[class].marked);
                    w.continue_through_vertex();
                }
            }
        }
        squares.insert(w.sq);
        let total = Rat::from_integer(circumference);
        let mut guard = 0;
        while w.t < total {
            guard += 1;
            assert!(guard < 1 << 22, "core curve exceeded step budget");
            match w.step() {
                WalkEvent::Edge(_) => {
                    if w.t < total {
                        squares.insert(w.sq);
                    }
                }
                WalkEvent::Vertex { .. } => {
                    unreachable!("mid-height curves avoid lattice points")
                }
            }
        }
    }
    squares.into_iter().collect()
}

/// The ordered intersection count `i(k, k2)`: the minimum over saddle
/// connections `s` in direction `k` of the number of points where the
/// interior of `s` meets the union of the connections in direction `k2`.
pub fn ordered_intersection(o: &Origami, k: Slope, k2: Slope) -> u64 {
    ordered_intersection_detailed(o, k, k2).0
}

/// Same count, also returning a connection realizing the minimum.
pub fn ordered_intersection_detailed(o: &Origami, k: Slope, k2: Slope) -> (u64, OrientedSc) {
    assert_ne!(k, k2, "directions must differ");
    let a = oriented_rays(o, k.primitive());
    let b = oriented_rays(o, k2.primitive());
    let mut b_pieces: BTreeMap<usize, Vec<((Rat, Rat), (Rat, Rat))>> = BTreeMap::new();
    for sc in &b {
        for (sq, p, q) in sc.pieces(o) {
            b_pieces.entry(sq).or_default().push((p, q));
        }
    }
    let mut best: Option<(u64, &OrientedSc)> = None;
    for sc in &a {
        let mut params: Vec<Rat> = Vec::new();
        let total = Rat::from_integer(sc.mult);
        let mut offset = Rat::zero();
        for (sq, p, q) in sc.pieces(o) {
            let seg_len = piece_param_length(p, q, sc.dir);
            if let Some(list) = b_pieces.get(&sq) {
                for (bp, bq) in list {
                    if let Some(u) = segment_cross_param(p, q, *bp, *bq) {
                        let t = offset + u * seg_len;
                        if t.is_positive() && t < total {
                            params.push(t);
                        }
                    }
                }
            }
            offset += seg_len;
        }
        params.sort();
        params.dedup();
        let count = params.len() as u64;
        if best.as_ref().map_or(true, |(c, _)| count < *c) {
            best = Some((count, sc));
        }
    }
    let (count, sc) = best.expect("a periodic direction has saddle connections");
    (count, sc.clone())
}

fn piece_param_length(p: (Rat, Rat), q: (Rat, Rat), dir: (i64, i64)) -> Rat {
    if dir.0 != 0 {
        (q.0 - p.0) / Rat::from_integer(dir.0)
    } else {
        (q.1 - p.1) / Rat::from_integer(dir.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::samples::*;

    #[test]
    fn torus_ray_hits() {
        let t = torus();
        let s = Sector::new(0, Corner::Sw);
        match trace_ray(&t, s, (1, 0), &Rat::from_integer(100)) {
            RayReport::Hit { mult, .. } => assert_eq!(mult, 1),
            _ => panic!("expected a hit"),
        }
        match trace_ray(&t, s, (1, 1), &Rat::from_integer(100)) {
            RayReport::Hit { mult, .. } => assert_eq!(mult, 1), // squared length 2
            _ => panic!("expected a hit"),
        }
        match trace_ray(&t, s, (2, 1), &Rat::from_integer(100)) {
            RayReport::Hit { mult, .. } => assert_eq!(mult, 1), // squared length 5
            _ => panic!("expected a hit"),
        }
    }

    #[test]
    fn torus_short_connections() {
        let t = torus();
        let scs = saddle_connections_up_to(&t, 2);
        // Up to sign: (1,0), (0,1), (1,1), (-1,1) — one connection per
        // primitive vector pair of squared length at most 2.
        assert_eq!(scs.len(), 4);
        assert!(scs.iter().all(|s| s.len2() <= 2));
        let slopes: std::collections::BTreeSet<Slope> = scs.iter().map(|s| s.slope()).collect();
        let expect: std::collections::BTreeSet<Slope> = [
            Slope::INFINITY,
            Slope::ZERO,
            Slope::of_vector(1, 1),
            Slope::of_vector(-1, 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(slopes, expect);
    }

    #[test]
    fn torus_skips_multiples_through_marked_points() {
        // (2,2) is not a saddle connection: its midpoint is marked.
        let t = torus();
        let scs = saddle_connections_up_to(&t, 8);
        assert!(scs.iter().all(|s| s.fwd.holonomy() != (2, 2)));
        assert!(scs.iter().any(|s| s.fwd.holonomy() == (2, 1)));
    }

    #[test]
    fn l3_unit_connections() {
        // All six edges of the complex are unit saddle connections.
        let o = l3();
        let scs = saddle_connections_up_to(&o, 1);
        assert_eq!(scs.len(), 6);
        assert_eq!(scs.iter().filter(|s| s.slope() == Slope::INFINITY).count(), 3);
        assert_eq!(scs.iter().filter(|s| s.slope() == Slope::ZERO).count(), 3);
    }

    #[test]
    fn monotone_in_the_bound() {
        let o = l3();
        let a = saddle_connections_up_to(&o, 4);
        let b = saddle_connections_up_to(&o, 9);
        let keys = |v: &[SaddleConnection]| {
            v.iter().map(|s| s.fwd.key()).collect::<std::collections::BTreeSet<_>>()
        };
        assert!(keys(&a).is_subset(&keys(&b)));
    }

    #[test]
    fn reversal_round_trip() {
        let o = w4();
        for sc in saddle_connections_up_to(&o, 10) {
            let r = sc.fwd.reversed(&o);
            let rr = r.reversed(&o);
            assert_eq!(rr, sc.fwd);
        }
    }

    #[test]
    fn retracing_reproduces_holonomy() {
        let o = l3();
        for sc in saddle_connections_up_to(&o, 25) {
            let again = trace_sc(&o, sc.fwd.start, sc.fwd.dir);
            assert_eq!(again.holonomy(), sc.fwd.holonomy());
            assert_eq!(again.end, sc.fwd.end);
        }
    }

    #[test]
    fn torus_horizontal_cylinder() {
        let d = cylinder_decomposition(&torus(), Slope::INFINITY);
        assert_eq!(d.cylinders.len(), 1);
        assert_eq!(d.cylinders[0].circumference, 1);
        assert_eq!(d.cylinders[0].height, 1);
        assert_eq!(d.cylinders[0].core_squares, vec![0]);
    }

    #[test]
    fn l3_horizontal_cylinders() {
        let d = cylinder_decomposition(&l3(), Slope::INFINITY);
        let mut ch: Vec<(i64, i64)> =
            d.cylinders.iter().map(|c| (c.circumference, c.height)).collect();
        ch.sort_unstable();
        assert_eq!(ch, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn w4_single_horizontal_cylinder() {
        let d = cylinder_decomposition(&w4(), Slope::INFINITY);
        assert_eq!(d.cylinders.len(), 1);
        assert_eq!(d.cylinders[0].circumference, 4);
        assert_eq!(d.cylinders[0].height, 1);
        assert_eq!(d.cylinders[0].core_squares, vec![0, 1, 2, 3]);
    }

    #[test]
    fn diagonal_cylinders_cover_with_exact_area() {
        for o in [torus(), torus_double(), l3(), w4()] {
            for k in [
                Slope::of_vector(1, 1),
                Slope::of_vector(1, 2),
                Slope::of_vector(-1, 1),
                Slope::ZERO,
            ] {
                let d = cylinder_decomposition(&o, k);
                let area: i64 = d.cylinders.iter().map(|c| c.circumference * c.height).sum();
                assert_eq!(area, o.num_squares() as i64);
                let mut covered: std::collections::BTreeSet<usize> = Default::default();
                for c in &d.cylinders {
                    covered.extend(c.core_squares.iter().copied());
                }
                assert_eq!(covered.len(), o.num_squares(), "{:?} dir {}", o, k);
            }
        }
    }

    #[test]
    fn torus_ordered_intersections() {
        let t = torus();
        assert_eq!(ordered_intersection(&t, Slope::ZERO, Slope::INFINITY), 0);
        assert_eq!(ordered_intersection(&t, Slope::of_vector(1, 1), Slope::INFINITY), 0);
        assert_eq!(ordered_intersection(&t, Slope::of_vector(1, 2), Slope::INFINITY), 1);
    }
}
