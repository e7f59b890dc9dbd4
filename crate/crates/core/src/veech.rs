//! Direction normalization, cusp data, reference domains, the coarse
//! fundamental domain and generating-set algorithms, and the
//! independent orbit oracle.
//!
//! Every equivalence verdict and every generator carries an integer
//! matrix witness, verified by applying it to the surface; nothing is
//! accepted on hash equality alone.

use crate::coset::{coset_enumeration, CosetResult};
use crate::geom::{cylinder_decomposition, oriented_rays};
use crate::matrix::{matrix_to_word, GroupElement, Letter, Sl2, Word};
use crate::origami::Origami;
use crate::slope::{Rat, Slope};
use crate::triangle::{triangles_with_vertex, EmbeddedTriangle, IdealTriangle};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// The canonical integer matrix sending the primitive vector of `k` to
/// `(1, 0)`. Among the Bezout solutions the one minimizing `|b|`, then
/// `|a|`, then preferring positive entries, is chosen.
pub fn direction_to_horizontal(k: Slope) -> Sl2 {
    let (p, q) = k.primitive();
    let gcd = num_integer::gcd(p, q);
    debug_assert_eq!(gcd, 1);
    let ext = num_integer::ExtendedGcd { gcd: 0, x: 0, y: 0 };
    let _ = ext;
    let e = p.extended_gcd(&q);
    debug_assert_eq!(e.gcd.abs(), 1);
    let (a0, b0) = if e.gcd == 1 { (e.x, e.y) } else { (-e.x, -e.y) };
    // Solution family: (a0 + t q, b0 - t p).
    let candidates: Vec<(i64, i64)> = {
        let mut ts: Vec<i64> = Vec::new();
        if p != 0 {
            let t0 = div_round_i64(b0, p);
            ts.extend([t0 - 2, t0 - 1, t0, t0 + 1, t0 + 2]);
        }
        if q != 0 {
            let t0 = div_round_i64(-a0, q);
            ts.extend([t0 - 2, t0 - 1, t0, t0 + 1, t0 + 2]);
        }
        if ts.is_empty() {
            ts.push(0);
        }
        ts.sort_unstable();
        ts.dedup();
        ts.into_iter().map(|t| (a0 + t * q, b0 - t * p)).collect()
    };
    let (a, b) = candidates
        .into_iter()
        .min_by_key(|&(a, b)| (b.abs(), a.abs(), b < 0, a < 0))
        .unwrap();
    let m = Sl2::new(a, b, -q, p);
    debug_assert_eq!(m.apply_vec((p, q)), (1, 0));
    m
}

fn div_round_i64(a: i64, b: i64) -> i64 {
    let q = a.div_euclid(b);
    let r = a - q * b;
    if 2 * r > b.abs() {
        q + 1
    } else {
        q
    }
}

/// A direction mapped to the horizontal, with the shortest and longest
/// saddle-connection lengths in that direction (in primitive-vector
/// units; these equal the horizontal lengths on the transformed
/// surface).
#[derive(Clone, Debug)]
pub struct Normalized {
    pub direction: Slope,
    pub chart: Sl2,
    pub transformed: Origami,
    pub delta: i64,
    pub kappa: i64,
}

pub fn normalize_direction(o: &Origami, k: Slope) -> Normalized {
    normalize_with_chart(o, k, direction_to_horizontal(k))
}

pub fn normalize_with_chart(o: &Origami, k: Slope, chart: Sl2) -> Normalized {
    debug_assert_eq!(chart.apply_vec(k.primitive()), (1, 0));
    let transformed = o.apply_matrix(&chart);
    let mults: Vec<i64> = oriented_rays(o, k.primitive()).iter().map(|sc| sc.mult).collect();
    let delta = *mults.iter().min().expect("periodic directions carry saddle connections");
    let kappa = *mults.iter().max().unwrap();
    debug_assert_eq!(
        oriented_rays(&transformed, (1, 0)).iter().map(|s| s.mult).min(),
        Some(delta)
    );
    Normalized { direction: k, chart, transformed, delta, kappa }
}

/// The period of the horizontal direction on `o`: the least `m > 0`
/// with `T^m . o` isomorphic to `o` projectively. Bounded by the least
/// common multiple of `c / gcd(c, h)` over the horizontal cylinders.
pub fn cusp_period(o: &Origami) -> i64 {
    let dec = cylinder_decomposition(o, Slope::INFINITY);
    let bound = dec
        .cylinders
        .iter()
        .map(|c| c.circumference / num_integer::gcd(c.circumference, c.height))
        .fold(1i64, num_integer::lcm);
    let mut cur = o.clone();
    for m in 1..=bound {
        cur = cur.apply_letter(Letter::T);
        if cur.is_isomorphic(o) || cur.apply_matrix(&Sl2::new(-1, 0, 0, -1)).is_isomorphic(o) {
            return m;
        }
    }
    unreachable!("the twist bound always realizes an isomorphism")
}

/// Projective membership in the Veech group: one of the two lifts must
/// stabilize the surface.
pub fn is_member(o: &Origami, g: &GroupElement) -> bool {
    let m = g.lift();
    o.apply_matrix(&m).is_isomorphic(o) || o.apply_matrix(&m.neg()).is_isomorphic(o)
}

/// Decides whether two periodic directions lie in the same Veech-group
/// orbit; on success the witness `g` satisfies `g(k1) = k2` and is
/// verified by applying it to the surface.
pub fn directions_equivalent(o: &Origami, k1: Slope, k2: Slope) -> Option<GroupElement> {
    let n1 = normalize_direction(o, k1);
    let n2 = normalize_direction(o, k2);
    if n1.delta != n2.delta || n1.kappa != n2.kappa {
        return None;
    }
    let period = cusp_period(&n1.transformed);
    let minus = Sl2::new(-1, 0, 0, -1);
    let mut cur = n1.transformed.clone();
    for m in 0..period {
        if cur.is_isomorphic(&n2.transformed)
            || cur.apply_matrix(&minus).is_isomorphic(&n2.transformed)
        {
            let g = GroupElement::of_sl2(
                n2.chart.inverse().mul(&Sl2::t_power(m)).mul(&n1.chart),
            );
            debug_assert_eq!(g.apply_slope(k1), k2);
            debug_assert!(is_member(o, &g), "equivalence witness fails membership");
            return Some(g);
        }
        cur = cur.apply_letter(Letter::T);
    }
    None
}

/// Per-cusp data: the chart, raw period, normalization lengths, the
/// finite family of ideal triangles tiling a reference domain for the
/// cusp, its boundary neighbors, and a stabilizer generator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CuspData {
    pub rep: Slope,
    pub chart: Sl2,
    pub delta: i64,
    pub kappa: i64,
    /// Minimal `m > 0` with the chart shear `T^m` stabilizing: the cusp
    /// width in raw chart units (the normalized period is `m / delta^2`).
    pub period: i64,
    /// Ideal triangles of the reference domain, in the original chart.
    pub triangles: Vec<IdealTriangle>,
    /// Embedding witnesses, parallel to `triangles`.
    pub witnesses: Vec<EmbeddedTriangle>,
    /// All non-rep vertices of the domain triangles.
    pub neighbors: Vec<Slope>,
    /// `chart^-1 T^period chart`, a parabolic generator fixing `rep`.
    pub stabilizer: GroupElement,
}

/// Builds the reference domain of the direction `k`: all ideal
/// triangles with vertex `k` whose chart slope interval meets the open
/// strip `(0, period)`. Candidate transverse sides are complete by the
/// normalized length bound `max(4 n^2 (1 + a^2), 4 n^2 + kappa^2 / (4
/// delta^2))` with `a = period / delta^2`.
pub fn reference_domain(o: &Origami, k: Slope) -> CuspData {
    reference_domain_with_chart(o, k, direction_to_horizontal(k))
}

pub fn reference_domain_with_chart(o: &Origami, k: Slope, chart: Sl2) -> CuspData {
    let n = normalize_with_chart(o, k, chart);
    let period = cusp_period(&n.transformed);
    let bound = strip_length_bound(o.num_squares() as i64, period, n.delta, n.kappa);
    let witnesses = triangles_with_vertex(
        o,
        k,
        &chart,
        (Rat::zero(), Rat::from_integer(period)),
        &bound,
        n.delta,
    );
    let triangles: Vec<IdealTriangle> = witnesses.iter().map(|t| t.ideal()).collect();
    debug_assert!(triangles.iter().all(|t| t.has_vertex(k)));
    assert!(
        strip_is_covered(&triangles, &chart, period),
        "reference domain must project onto the whole strip"
    );
    let mut neighbors: Vec<Slope> = triangles
        .iter()
        .flat_map(|t| t.slopes.iter().copied())
        .filter(|s| *s != k)
        .collect();
    neighbors.sort();
    neighbors.dedup();
    let stabilizer = GroupElement::of_sl2(
        chart.inverse().mul(&Sl2::t_power(period)).mul(&chart),
    );
    debug_assert!(is_member(o, &stabilizer));
    debug_assert_eq!(stabilizer.apply_slope(k), k);
    CuspData {
        rep: k,
        chart,
        delta: n.delta,
        kappa: n.kappa,
        period,
        triangles,
        witnesses,
        neighbors,
        stabilizer,
    }
}

fn strip_length_bound(n: i64, period: i64, delta: i64, kappa: i64) -> Rat {
    let a = Rat::new(period, delta * delta);
    let four_n2 = Rat::from_integer(4 * n * n);
    let first = four_n2 * (Rat::one() + a * a);
    let second = four_n2 + Rat::new(kappa * kappa, 4 * delta * delta);
    first.max(second)
}

fn strip_is_covered(triangles: &[IdealTriangle], chart: &Sl2, period: i64) -> bool {
    // The chart slope intervals of the triangles must cover (0, period).
    let mut intervals: Vec<(Rat, Rat)> = Vec::new();
    for t in triangles {
        let finite: Vec<Rat> = t
            .slopes
            .iter()
            .map(|s| chart.apply_slope(*s))
            .filter(|s| !s.is_infinite())
            .map(|s| s.value().unwrap())
            .collect();
        if finite.len() == 2 {
            intervals.push((finite[0].min(finite[1]), finite[0].max(finite[1])));
        }
    }
    intervals.sort();
    let mut reach = Rat::zero();
    for (lo, hi) in intervals {
        if lo > reach {
            return false;
        }
        reach = reach.max(hi);
        if reach >= Rat::from_integer(period) {
            return true;
        }
    }
    reach >= Rat::from_integer(period)
}

/// A chart for `k` shifted so that the anchor triangle lands inside the
/// reference strip, keeping the accumulated domain connected.
fn anchored_chart(o: &Origami, k: Slope, anchor: &IdealTriangle) -> Sl2 {
    debug_assert!(anchor.has_vertex(k));
    let base = direction_to_horizontal(k);
    let n = normalize_with_chart(o, k, base);
    let period = cusp_period(&n.transformed);
    let finite: Vec<Rat> = anchor
        .slopes
        .iter()
        .map(|s| base.apply_slope(*s))
        .filter(|s| !s.is_infinite())
        .map(|s| s.value().unwrap())
        .collect();
    debug_assert_eq!(finite.len(), 2);
    let hi = finite[0].max(finite[1]);
    let lo = finite[0].min(finite[1]);
    // Smallest integer shift putting [lo, hi] across (0, period).
    let s = (-hi).floor().to_integer() + 1;
    debug_assert!(Rat::from_integer(s) + hi > Rat::zero());
    debug_assert!(Rat::from_integer(s) + lo < Rat::from_integer(period));
    Sl2::t_power(s).mul(&base)
}

/// One discovered cusp class with its discovery generation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CuspClass {
    pub data: CuspData,
    /// Breadth-first generation at which the class was found (the root
    /// horizontal direction has generation 0).
    pub generation: usize,
}

/// Output of the breadth-first construction: one reference domain per
/// cusp class, the union containing a fundamental domain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoarseFundamentalDomain {
    pub cusps: Vec<CuspClass>,
    /// Number of iterations performed; the largest quotient-graph
    /// distance from the horizontal class to any other cusp class.
    pub depth: usize,
    /// Orbit representatives of the ideal triangles of the domain.
    pub triangle_classes: Vec<IdealTriangle>,
    /// All ideal triangles of the accumulated domain.
    pub domain_triangles: Vec<IdealTriangle>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("iteration cap {0} exceeded; the group may not act with finitely many cusps")]
    CapExceeded(usize),
}

/// Explores cusp classes breadth-first from the horizontal direction,
/// accumulating one reference domain per class. Each new domain is
/// anchored at the triangle through which its cusp was discovered, so
/// the union stays connected.
pub fn coarse_domain(o: &Origami) -> CoarseFundamentalDomain {
    coarse_domain_capped(o, 64).expect("iteration cap hit on a square-tiled surface")
}

pub fn coarse_domain_capped(
    o: &Origami,
    cap: usize,
) -> Result<CoarseFundamentalDomain, DomainError> {
    let root = reference_domain(o, Slope::INFINITY);
    let mut cusps: Vec<CuspClass> = vec![CuspClass { data: root.clone(), generation: 0 }];
    // (slope, anchor triangle) pairs, one per new equivalence class.
    let mut frontier = filter_new_classes(o, new_class_candidates(&root), &cusps);
    let mut generation = 0usize;
    while !frontier.is_empty() {
        generation += 1;
        if generation > cap {
            return Err(DomainError::CapExceeded(cap));
        }
        let mut discovered: Vec<(Slope, IdealTriangle)> = Vec::new();
        for (k, anchor) in frontier {
            let chart = anchored_chart(o, k, &anchor);
            let cd = reference_domain_with_chart(o, k, chart);
            assert!(
                cd.triangles.contains(&anchor),
                "anchored reference domain contains its discovery triangle"
            );
            let cands = new_class_candidates(&cd);
            cusps.push(CuspClass { data: cd, generation });
            for (nb, tri) in cands {
                if !discovered.iter().any(|(s, _)| *s == nb) {
                    discovered.push((nb, tri));
                }
            }
        }
        frontier = filter_new_classes(o, discovered, &cusps);
    }

    let mut domain_triangles: Vec<IdealTriangle> = cusps
        .iter()
        .flat_map(|c| c.data.triangles.iter().copied())
        .collect();
    domain_triangles.sort();
    domain_triangles.dedup();

    let mut classifier = TriangleClassifier::new(o);
    let mut triangle_classes: Vec<IdealTriangle> = Vec::new();
    for t in &domain_triangles {
        if !triangle_classes
            .iter()
            .any(|rep| classifier.equivalent(t, rep).is_some())
        {
            triangle_classes.push(*t);
        }
    }

    Ok(CoarseFundamentalDomain { cusps, depth: generation, triangle_classes, domain_triangles })
}

fn new_class_candidates(cd: &CuspData) -> Vec<(Slope, IdealTriangle)> {
    let mut out: Vec<(Slope, IdealTriangle)> = Vec::new();
    for t in &cd.triangles {
        for &v in &t.slopes {
            if v != cd.rep && !out.iter().any(|(s, _)| *s == v) {
                out.push((v, *t));
            }
        }
    }
    out
}

/// One representative per equivalence class among the candidates, none
/// equivalent to an already known cusp.
fn filter_new_classes(
    o: &Origami,
    candidates: Vec<(Slope, IdealTriangle)>,
    known: &[CuspClass],
) -> Vec<(Slope, IdealTriangle)> {
    let mut next: Vec<(Slope, IdealTriangle)> = Vec::new();
    'cand: for (nb, tri) in candidates {
        for c in known {
            if directions_equivalent(o, nb, c.data.rep).is_some() {
                continue 'cand;
            }
        }
        for (s, _) in &next {
            if directions_equivalent(o, nb, *s).is_some() {
                continue 'cand;
            }
        }
        next.push((nb, tri));
    }
    next
}

/// Decides Veech-group equivalence of ideal triangles through cusp
/// witnesses: a witness pairing two vertices extends to the triangle
/// match, searched over vertex pairings and stabilizer shifts, and the
/// final map is verified exactly.
pub struct TriangleClassifier<'a> {
    o: &'a Origami,
    charts: BTreeMap<Slope, (Sl2, i64)>,
}

impl<'a> TriangleClassifier<'a> {
    pub fn new(o: &'a Origami) -> Self {
        TriangleClassifier { o, charts: BTreeMap::new() }
    }

    fn chart_and_period(&mut self, k: Slope) -> (Sl2, i64) {
        if let Some(v) = self.charts.get(&k) {
            return *v;
        }
        let n = normalize_direction(self.o, k);
        let period = cusp_period(&n.transformed);
        self.charts.insert(k, (n.chart, period));
        (n.chart, period)
    }

    /// A verified `g` with `g(t1) = t2`, if the two triangles are in the
    /// same orbit.
    pub fn equivalent(&mut self, t1: &IdealTriangle, t2: &IdealTriangle) -> Option<GroupElement> {
        for &u in &t1.slopes {
            for &w in &t2.slopes {
                let g0 = match directions_equivalent(self.o, u, w) {
                    Some(g) => g,
                    None => continue,
                };
                let (chart, period) = self.chart_and_period(w);
                let p = t1.map(&g0.lift()).map(&chart);
                let q = t2.map(&chart);
                // Both have the chart infinity as a vertex; the shift
                // aligning their finite vertex pairs must be an integer
                // multiple of the period.
                let pf = finite_sorted(&p);
                let qf = finite_sorted(&q);
                if pf.len() != 2 || qf.len() != 2 {
                    continue;
                }
                let d0 = qf[0] - pf[0];
                let d1 = qf[1] - pf[1];
                if d0 != d1 || !d0.is_integer() || *d0.numer() % period != 0 {
                    continue;
                }
                let shift = chart
                    .inverse()
                    .mul(&Sl2::t_power(*d0.numer()))
                    .mul(&chart);
                let g = GroupElement::of_sl2(shift.mul(&g0.lift()));
                if t1.map(&g.lift()) == *t2 && is_member(self.o, &g) {
                    return Some(g);
                }
            }
        }
        None
    }
}

fn finite_sorted(t: &IdealTriangle) -> Vec<Rat> {
    let mut v: Vec<Rat> = t
        .slopes
        .iter()
        .filter(|s| !s.is_infinite())
        .map(|s| s.value().unwrap())
        .collect();
    v.sort();
    v
}

/// Where a generator comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Parabolic generator of the stabilizer of a cusp direction.
    CuspStabilizer(Slope),
    /// Maps the horizontal direction onto the given equivalent slope,
    /// carrying its reference domain along.
    MapsHorizontalTo(Slope),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Generator {
    pub element: GroupElement,
    pub word: Word,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub generators: Vec<Generator>,
    /// Iterations performed: `2 * depth + 1`.
    pub iterations: usize,
}

/// Produces a generating set of the Veech group by exploring the
/// triangle vertices reachable from the horizontal direction for
/// `2 * depth + 1` rounds, attaching to each visited slope either a
/// stabilizer generator or an element carrying the horizontal class
/// onto it.
pub fn generator_set(o: &Origami) -> GeneratorSet {
    let fd = coarse_domain(o);
    generator_set_from(o, &fd)
}

pub fn generator_set_from(o: &Origami, fd: &CoarseFundamentalDomain) -> GeneratorSet {
    let rounds = 2 * fd.depth + 1;
    let root = &fd.cusps[0].data;
    debug_assert_eq!(root.rep, Slope::INFINITY);

    struct Entry {
        strip: Vec<IdealTriangle>,
        generator: Generator,
    }
    let mut table: BTreeMap<Slope, Entry> = BTreeMap::new();
    table.insert(
        Slope::INFINITY,
        Entry {
            strip: root.triangles.clone(),
            generator: Generator {
                element: root.stabilizer,
                word: matrix_to_word(&root.stabilizer),
                provenance: Provenance::CuspStabilizer(Slope::INFINITY),
            },
        },
    );

    for _ in 0..rounds {
        // Vertices of the current strips, with a triangle containing each.
        let mut incoming: Vec<(Slope, IdealTriangle)> = Vec::new();
        for e in table.values() {
            for t in &e.strip {
                for &v in &t.slopes {
                    if !table.contains_key(&v) && !incoming.iter().any(|(s, _)| *s == v) {
                        incoming.push((v, *t));
                    }
                }
            }
        }
        for (k, tri) in incoming {
            let entry = if let Some(g0) = directions_equivalent(o, Slope::INFINITY, k) {
                // Shift within the horizontal stabilizer so the carried
                // strip contains the discovery triangle.
                let pre = tri.map(&g0.lift().inverse());
                debug_assert!(pre.has_vertex(Slope::INFINITY));
                let pf = finite_sorted(&pre);
                let period = root.period;
                let (lo, hi) = (pf[0], pf[1]);
                // A period multiple j with T^j(pre) meeting the strip;
                // then g = g0 T^{-j} carries the reference strip onto a
                // family containing the discovery triangle.
                let j = find_period_shift(lo, hi, period);
                let g = GroupElement::of_sl2(g0.lift().mul(&Sl2::t_power(-j)));
                debug_assert_eq!(g.apply_slope(Slope::INFINITY), k);
                let carried: Vec<IdealTriangle> =
                    root.triangles.iter().map(|t| t.map(&g.lift())).collect();
                debug_assert!(
                    carried.contains(&tri),
                    "carried strip contains the discovery triangle"
                );
                Entry {
                    strip: carried,
                    generator: Generator {
                        word: matrix_to_word(&g),
                        element: g,
                        provenance: Provenance::MapsHorizontalTo(k),
                    },
                }
            } else {
                let chart = anchored_chart(o, k, &tri);
                let cd = reference_domain_with_chart(o, k, chart);
                assert!(cd.triangles.contains(&tri));
                Entry {
                    strip: cd.triangles.clone(),
                    generator: Generator {
                        element: cd.stabilizer,
                        word: matrix_to_word(&cd.stabilizer),
                        provenance: Provenance::CuspStabilizer(k),
                    },
                }
            };
            debug_assert!(is_member(o, &entry.generator.element));
            table.insert(k, entry);
        }
    }

    let generators: Vec<Generator> = table.into_values().map(|e| e.generator).collect();
    GeneratorSet { generators, iterations: rounds }
}

/// The period multiple `j` with `[lo + j, hi + j]` meeting the open
/// strip `(0, period)` — equivalently `U^{-j}` pulls the strip over the
/// interval.
fn find_period_shift(lo: Rat, hi: Rat, period: i64) -> i64 {
    // Need hi + j > 0 and lo + j < period with j a period multiple.
    let p = Rat::from_integer(period);
    let mut j = (-(hi / p)).floor().to_integer() * period;
    for _ in 0..4 {
        if Rat::from_integer(j) + hi > Rat::zero() && Rat::from_integer(j) + lo < p {
            return j;
        }
        j += period;
    }
    // The stabilizer orbit of a triangle with the cusp vertex meets the
    // strip, so one of the shifts above works.
    unreachable!("no period shift meets the strip")
}

/// Result of the independent orbit oracle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleResult {
    /// Index of the Veech group in the projective modular group.
    pub index: u64,
    /// Number of shear orbits on the surface orbit: the cusp count.
    pub cusp_count: u64,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("orbit exceeded the cap of {0} surfaces")]
pub struct OrbitCapExceeded(pub usize);

/// Breadth-first orbit of the isomorphism class of `o` under the
/// modular group: the orbit size equals the index of the stabilizer.
pub fn oracle_orbit(o: &Origami, cap: usize) -> Result<OracleResult, OrbitCapExceeded> {
    let mut index_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut states: Vec<Origami> = Vec::new();
    let mut queue: Vec<usize> = Vec::new();
    index_of.insert(o.canonical_key(), 0);
    states.push(o.clone());
    queue.push(0);
    let mut head = 0;
    while head < queue.len() {
        let i = queue[head];
        head += 1;
        for l in [Letter::S, Letter::T, Letter::TInv] {
            let next = states[i].apply_letter(l);
            let key = next.canonical_key();
            if !index_of.contains_key(&key) {
                if states.len() >= cap {
                    return Err(OrbitCapExceeded(cap));
                }
                index_of.insert(key, states.len());
                queue.push(states.len());
                states.push(next);
            }
        }
    }
    // Shear action as a permutation of the orbit.
    let t_perm: Vec<usize> = states
        .iter()
        .map(|s| index_of[&s.apply_letter(Letter::T).canonical_key()])
        .collect();
    let mut seen = vec![false; t_perm.len()];
    let mut cusps = 0u64;
    for start in 0..t_perm.len() {
        if seen[start] {
            continue;
        }
        cusps += 1;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = t_perm[cur];
        }
    }
    Ok(OracleResult { index: states.len() as u64, cusp_count: cusps })
}

/// The volume bound: `(pi/3) * index <= pi * |triangle classes|`,
/// checked as an exact integer comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VolumeReport {
    pub index: u64,
    pub triangle_classes: usize,
    /// Covolume of the group as a rational multiple of pi.
    pub volume_over_pi: Rat,
    pub bound_ok: bool,
}

pub fn volume_report(o: &Origami) -> VolumeReport {
    let fd = coarse_domain(o);
    let oracle = oracle_orbit(o, 1_000_000).expect("orbit cap");
    volume_report_from(&fd, &oracle)
}

pub fn volume_report_from(fd: &CoarseFundamentalDomain, oracle: &OracleResult) -> VolumeReport {
    VolumeReport {
        index: oracle.index,
        triangle_classes: fd.triangle_classes.len(),
        volume_over_pi: Rat::new(oracle.index as i64, 3),
        bound_ok: oracle.index as usize <= 3 * fd.triangle_classes.len(),
    }
}

/// Certifies that the elements generate the Veech group: every element
/// is a verified member, and the coset enumeration of the generated
/// subgroup reproduces the oracle index.
pub fn certify_generators(
    o: &Origami,
    gens: &GeneratorSet,
    oracle: &OracleResult,
    coset_cap: usize,
) -> bool {
    if !gens.generators.iter().all(|g| is_member(o, &g.element)) {
        return false;
    }
    let words: Vec<Word> = gens.generators.iter().map(|g| g.word.clone()).collect();
    coset_enumeration(&words, coset_cap) == CosetResult::Index(oracle.index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::samples::*;

    #[test]
    fn bezout_charts() {
        assert_eq!(direction_to_horizontal(Slope::INFINITY), Sl2::IDENTITY);
        let a = direction_to_horizontal(Slope::ZERO);
        assert_eq!(a.apply_vec((0, 1)), (1, 0));
        let b = direction_to_horizontal(Slope::of_vector(1, 2));
        assert_eq!(b, Sl2::new(1, 0, -2, 1));
    }

    #[test]
    fn torus_normalization() {
        let n = normalize_direction(&torus(), Slope::INFINITY);
        assert_eq!(n.chart, Sl2::IDENTITY);
        assert_eq!((n.delta, n.kappa), (1, 1));
    }

    #[test]
    fn periods() {
        assert_eq!(cusp_period(&torus()), 1);
        assert_eq!(cusp_period(&w4()), 4);
        assert_eq!(cusp_period(&l3()), 2);
    }

    #[test]
    fn period_minimality_certificates() {
        for o in [l3(), w4()] {
            let p = cusp_period(&o);
            for d in 1..p {
                if p % d == 0 {
                    let mut cur = o.clone();
                    for _ in 0..d {
                        cur = cur.apply_letter(Letter::T);
                    }
                    let minus = Sl2::new(-1, 0, 0, -1);
                    assert!(
                        !cur.is_isomorphic(&o) && !cur.apply_matrix(&minus).is_isomorphic(&o),
                        "period divisor {} unexpectedly stabilizes",
                        d
                    );
                }
            }
        }
    }

    #[test]
    fn torus_directions_all_equivalent() {
        let t = torus();
        let g = directions_equivalent(&t, Slope::ZERO, Slope::INFINITY).unwrap();
        assert_eq!(g.apply_slope(Slope::ZERO), Slope::INFINITY);
        assert!(directions_equivalent(&t, Slope::of_vector(3, 5), Slope::INFINITY).is_some());
        // Reflexivity with the identity witness.
        let r = directions_equivalent(&t, Slope::INFINITY, Slope::INFINITY).unwrap();
        assert!(r.is_identity());
    }

    #[test]
    fn torus_reference_domain() {
        let cd = reference_domain(&torus(), Slope::INFINITY);
        assert_eq!(cd.period, 1);
        assert_eq!(cd.triangles.len(), 1);
        assert_eq!(
            cd.triangles[0],
            IdealTriangle::new(Slope::INFINITY, Slope::ZERO, Slope::of_vector(1, 1))
        );
        let mut nb = cd.neighbors.clone();
        nb.sort();
        assert_eq!(nb, vec![Slope::ZERO, Slope::of_vector(1, 1)]);
        assert_eq!(cd.stabilizer, GroupElement::t());
    }

    #[test]
    fn torus_coarse_domain() {
        let fd = coarse_domain(&torus());
        assert_eq!(fd.cusps.len(), 1);
        assert_eq!(fd.depth, 0);
        assert_eq!(fd.triangle_classes.len(), 1);
    }

    #[test]
    fn torus_oracle() {
        let r = oracle_orbit(&torus(), 1000).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.cusp_count, 1);
    }

    #[test]
    fn w4_oracle_is_nontrivial() {
        let r = oracle_orbit(&w4(), 100_000).unwrap();
        assert!(r.index > 1);
    }

    #[test]
    fn oracle_cap_is_reported() {
        match oracle_orbit(&w4(), 3) {
            Err(OrbitCapExceeded(3)) => {}
            other => panic!("expected the cap report, got {:?}", other.map(|r| r.index)),
        }
    }

    #[test]
    fn torus_generators_generate_everything() {
        let t = torus();
        let gens = generator_set(&t);
        assert!(gens
            .generators
            .iter()
            .any(|g| g.element == GroupElement::t()));
        assert!(gens
            .generators
            .iter()
            .any(|g| g.element.apply_slope(Slope::INFINITY) == Slope::ZERO));
        let oracle = oracle_orbit(&t, 1000).unwrap();
        assert!(certify_generators(&t, &gens, &oracle, 100_000));
    }

    #[test]
    fn torus_volume_bound() {
        let v = volume_report(&torus());
        assert!(v.bound_ok);
        assert_eq!(v.volume_over_pi, Rat::new(1, 3));
    }
}
