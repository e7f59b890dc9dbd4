//! The self-check suite: runs every documented invariant against a
//! surface with configurable caps and reports one line per check.

use crate::coset::{coset_enumeration, CosetResult};
use crate::geom::{cylinder_decomposition, ordered_intersection, saddle_connections_up_to};
use crate::graph::{connecting_path, local_ball, quotient_graph_from, triangle_rotation};
use crate::matrix::{matrix_to_word, Sl2, Word};
use crate::origami::Origami;
use crate::slope::{det2, Rat, Slope};
use crate::tess::arr::faces_in_region;
use crate::tess::{locate, Region};
use crate::triangle::embed_check;
use crate::veech::{
    coarse_domain_capped, cusp_period, generator_set_from, is_member, normalize_direction,
    oracle_orbit, reference_domain, volume_report_from, TriangleClassifier,
};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub orbit_cap: usize,
    pub coset_cap: usize,
    pub iteration_cap: usize,
    pub len2_cap: i64,
    pub sample_points: usize,
    pub sample_pairs: usize,
    pub seed: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            orbit_cap: 1_000_000,
            coset_cap: 1_000_000,
            iteration_cap: 64,
            len2_cap: 20,
            sample_points: 25,
            sample_pairs: 10,
            seed: 0x5eed_1234,
        }
    }
}

/// Small deterministic generator for the sampled checks.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn in_range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % ((hi - lo + 1) as u64)) as i64
    }
}

pub fn run_suite(o: &Origami, caps: &Caps) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = Rng(caps.seed | 1);
    let n = o.num_squares() as i64;

    // Cone angles against the Euler characteristic.
    {
        let g = o.genus() as i64;
        let sum: i64 = o.vertex_classes().iter().map(|c| 2 * (c.turns as i64) - 2).sum();
        out.push(check("cone angle sum", sum == 4 * g - 4, format!("genus {}", g)));
    }

    // Canonical form: idempotent and stable under the group action
    // round trip.
    {
        let (c1, _) = o.canonical_form();
        let (c2, _) = c1.canonical_form();
        let idem = c1.canonical_key() == c2.canonical_key();
        let back = o
            .apply_matrix(&Sl2::new(2, 1, 1, 1))
            .apply_matrix(&Sl2::new(2, 1, 1, 1).inverse());
        out.push(check(
            "canonical form idempotent, inverse action returns",
            idem && back.is_isomorphic(o),
            String::new(),
        ));
    }

    // Action composition law on sampled matrices.
    {
        let mats = [Sl2::S, Sl2::T, Sl2::new(2, 1, 1, 1), Sl2::new(1, -2, 0, 1)];
        let mut ok = true;
        for m1 in mats {
            for m2 in mats {
                let lhs = o.apply_matrix(&m1).apply_matrix(&m2);
                let rhs = o.apply_matrix(&m2.mul(&m1));
                ok &= lhs.is_isomorphic(&rhs);
            }
        }
        out.push(check("matrix action composition law", ok, String::new()));
    }

    // Word decomposition round trips.
    {
        let mut ok = true;
        for _ in 0..caps.sample_pairs {
            let w = Word(
                (0..rng.in_range(1, 8))
                    .map(|_| match rng.next() % 3 {
                        0 => crate::matrix::Letter::S,
                        1 => crate::matrix::Letter::T,
                        _ => crate::matrix::Letter::TInv,
                    })
                    .collect(),
            );
            let g = w.group_element();
            ok &= matrix_to_word(&g).group_element() == g;
        }
        out.push(check("word decomposition multiplies out", ok, String::new()));
    }

    // Saddle connections: monotone in the bound, retracing reproduces
    // holonomies and endpoints.
    {
        let a = saddle_connections_up_to(o, caps.len2_cap / 2);
        let b = saddle_connections_up_to(o, caps.len2_cap);
        let keys = |v: &[crate::geom::SaddleConnection]| {
            v.iter().map(|s| s.fwd.key()).collect::<std::collections::BTreeSet<_>>()
        };
        let mono = keys(&a).is_subset(&keys(&b));
        let retrace = b.iter().all(|sc| {
            let t = crate::geom::trace_sc(o, sc.fwd.start, sc.fwd.dir);
            t.holonomy() == sc.fwd.holonomy() && t.end == sc.fwd.end
        });
        out.push(check(
            "saddle connections monotone and retraceable",
            mono && retrace,
            format!("{} connections up to {}", b.len(), caps.len2_cap),
        ));
    }

    // Cylinder decompositions: exact areas and square coverage.
    {
        let mut ok = true;
        for k in [
            Slope::INFINITY,
            Slope::ZERO,
            Slope::of_vector(1, 1),
            Slope::of_vector(2, 1),
            Slope::of_vector(-1, 2),
        ] {
            let d = cylinder_decomposition(o, k);
            let area: i64 = d.cylinders.iter().map(|c| c.circumference * c.height).sum();
            let mut covered = std::collections::BTreeSet::new();
            for c in &d.cylinders {
                covered.extend(c.core_squares.iter().copied());
            }
            ok &= area == n && covered.len() == o.num_squares();
        }
        out.push(check("cylinder areas and coverage", ok, String::new()));
    }

    // Embedded triangles: closure, area bound, distinct slopes,
    // labeling independence.
    {
        let scs = saddle_connections_up_to(o, caps.len2_cap);
        let mut ok = true;
        let mut count = 0;
        for i in 0..scs.len() {
            for j in 0..scs.len() {
                let a = &scs[i].fwd;
                let b = &scs[j].fwd;
                if o.class_of(a.start) != o.class_of(b.start)
                    || det2(a.holonomy(), b.holonomy()) == 0
                {
                    continue;
                }
                if let Ok(t) = embed_check(o, a, b) {
                    count += 1;
                    let s = t.sides();
                    ok &= s[0].0 + s[1].0 + s[2].0 == 0 && s[0].1 + s[1].1 + s[2].1 == 0;
                    ok &= t.area2().abs() <= 2 * n;
                    let sl = t.ideal().slopes;
                    ok &= sl[0] != sl[1] && sl[1] != sl[2];
                    ok &= embed_check(o, b, a).is_ok();
                }
            }
        }
        out.push(check(
            "triangle closure, area bound, symmetry",
            ok && count > 0,
            format!("{} accepted", count),
        ));
    }

    // Balls: bipartite with degree-three triangle vertices.
    {
        let ball = local_ball(o, Slope::INFINITY, 2, 2).expect("radius within guard");
        let mut ok = !ball.triangles.is_empty();
        for (ti, _) in ball.triangles.iter().enumerate() {
            ok &= ball.edges.iter().filter(|(_, w)| *w == ti).count() == 3;
        }
        for &(si, ti) in &ball.edges {
            ok &= ball.triangles[ti].has_vertex(ball.slopes[si]);
        }
        out.push(check(
            "ball bipartite with degree-three triangles",
            ok,
            format!("{} slopes, {} triangles", ball.slopes.len(), ball.triangles.len()),
        ));
    }

    // Connecting paths within the intersection bound.
    {
        let mut ok = true;
        let mut used = 0;
        while used < caps.sample_pairs {
            let k1 = Slope::of_vector(rng.in_range(-5, 5), rng.in_range(1, 5));
            let k2 = Slope::INFINITY;
            if k1 == k2 {
                continue;
            }
            used += 1;
            let p = connecting_path(o, k1, k2);
            let m = ordered_intersection(o, k1, k2).min(ordered_intersection(o, k2, k1));
            let bound = ((m + 1) as f64).log2().floor() as u32 + 1;
            ok &= p.length() <= bound;
            for i in 0..p.triangles.len() {
                ok &= p.triangles[i].has_vertex(p.slopes[i])
                    && p.triangles[i].has_vertex(p.slopes[i + 1]);
            }
        }
        out.push(check("connecting paths within the halving bound", ok, String::new()));
    }

    // Point location always answers, and interior answers contain the
    // point.
    {
        let mut ok = true;
        for _ in 0..caps.sample_points {
            let x = Rat::new(rng.in_range(-8, 8), rng.in_range(1, 8));
            let y = Rat::new(rng.in_range(1, 12), rng.in_range(1, 6));
            match locate(o, x, y) {
                crate::tess::Location::Interior(t) => {
                    ok &= crate::tess::point_strictly_inside(&t, x, y);
                }
                crate::tess::Location::OnEdge(_, _, g) => {
                    ok &= crate::tess::point_on_geodesic(&g, x, y);
                }
            }
        }
        out.push(check("point location covers sampled points", ok, String::new()));
    }

    // Cusp periods are minimal.
    {
        let norm = normalize_direction(o, Slope::INFINITY);
        let p = cusp_period(&norm.transformed);
        let mut ok = true;
        for d in 1..p {
            if p % d == 0 {
                let mut cur = norm.transformed.clone();
                for _ in 0..d {
                    cur = cur.apply_letter(crate::matrix::Letter::T);
                }
                let minus = Sl2::new(-1, 0, 0, -1);
                ok &= !cur.is_isomorphic(&norm.transformed)
                    && !cur.apply_matrix(&minus).is_isomorphic(&norm.transformed);
            }
        }
        out.push(check("cusp period minimality", ok, format!("period {}", p)));
    }

    // Reference domains: stabilizer certificates and completeness of
    // the strip family on sampled directions.
    {
        let mut ok = true;
        for _ in 0..3 {
            let k = Slope::of_vector(rng.in_range(-5, 5), rng.in_range(1, 5));
            let cd = reference_domain(o, k);
            ok &= is_member(o, &cd.stabilizer);
            ok &= cd.stabilizer.apply_slope(k) == k;
            // Triangles in a wider window are stabilizer shifts of the
            // reference family.
            let wide = crate::triangle::triangles_with_vertex(
                o,
                k,
                &cd.chart,
                (Rat::from_integer(-cd.period), Rat::from_integer(2 * cd.period)),
                &wide_bound(o, &cd),
                cd.delta,
            );
            for t in wide {
                let ideal = t.ideal();
                let mut found = false;
                for base in &cd.triangles {
                    for j in -3..=3i64 {
                        let shift = cd
                            .chart
                            .inverse()
                            .mul(&Sl2::t_power(j * cd.period))
                            .mul(&cd.chart);
                        if base.map(&shift) == ideal {
                            found = true;
                        }
                    }
                }
                ok &= found;
            }
        }
        out.push(check("reference domains complete up to the stabilizer", ok, String::new()));
    }

    // The heavy cross-validation: oracle vs. exploration vs. cosets.
    {
        match (coarse_domain_capped(o, caps.iteration_cap), oracle_orbit(o, caps.orbit_cap)) {
            (Ok(fd), Ok(oracle)) => {
                let cusp_match = fd.cusps.len() as u64 == oracle.cusp_count;
                let qg = quotient_graph_from(o, &fd);
                // The edge count equals the group index exactly when the
                // marking is the full lattice-point preimage (a balanced
                // torus cover); otherwise the structural identity
                // E = sum of 3/|stab| is what must hold.
                let balanced = o.vertex_classes().iter().all(|c| c.marked);
                let structural: u64 = qg
                    .stabilizer_orders
                    .iter()
                    .map(|&s| 3 / s as u64)
                    .sum();
                let edge_match = if balanced {
                    qg.edge_count() == oracle.index
                } else {
                    qg.edge_count() == structural
                };
                let gens = generator_set_from(o, &fd);
                let membership = gens.generators.iter().all(|g| is_member(o, &g.element));
                let words: Vec<Word> = gens.generators.iter().map(|g| g.word.clone()).collect();
                let coset_match =
                    coset_enumeration(&words, caps.coset_cap) == CosetResult::Index(oracle.index);
                let vol = volume_report_from(&fd, &oracle);
                let gen_dist: bool = qg
                    .cusps
                    .iter()
                    .zip(qg.distances.iter())
                    .all(|((_, gen), d)| *gen as u32 == *d);
                // No certified rotation fixes an edge representative.
                let mut free = true;
                for (ti, t) in qg.triangle_classes.iter().enumerate() {
                    if qg.stabilizer_orders[ti] == 3 {
                        if let Some(g) = triangle_rotation(o, t) {
                            for &v in &t.slopes {
                                free &= g.apply_slope(v) != v;
                            }
                        }
                    }
                }
                out.push(check(
                    "cusp classes match the oracle",
                    cusp_match,
                    format!("{} classes", fd.cusps.len()),
                ));
                out.push(check(
                    if balanced {
                        "quotient edges equal the group index"
                    } else {
                        "quotient edges fold by triangle stabilizers"
                    },
                    edge_match,
                    format!("edges {}, index {}", qg.edge_count(), oracle.index),
                ));
                out.push(check(
                    "generators verified and generate the group",
                    membership && coset_match,
                    format!("{} generators", gens.generators.len()),
                ));
                out.push(check(
                    "volume bound",
                    vol.bound_ok,
                    format!("index {} vs 3 x {}", vol.index, vol.triangle_classes),
                ));
                out.push(check("quotient distances match generations", gen_dist, String::new()));
                out.push(check("group acts freely on edges", free, String::new()));
                // Triangle classes are pairwise inequivalent.
                let mut cls = TriangleClassifier::new(o);
                let mut distinct = true;
                for i in 0..fd.triangle_classes.len() {
                    for j in i + 1..fd.triangle_classes.len() {
                        distinct &= cls
                            .equivalent(&fd.triangle_classes[i], &fd.triangle_classes[j])
                            .is_none();
                    }
                }
                out.push(check(
                    "triangle classes pairwise inequivalent",
                    distinct,
                    format!("{} classes", fd.triangle_classes.len()),
                ));
            }
            (fd, orc) => {
                out.push(check(
                    "cross validation",
                    false,
                    format!("domain: {:?}, oracle: {:?}", fd.is_ok(), orc.is_ok()),
                ));
            }
        }
    }

    // Tiles over the default region.
    {
        let region = Region::new(
            Rat::zero(),
            Rat::one(),
            Rat::new(1, 4),
            Rat::from_integer(2),
        )
        .unwrap();
        let patch = faces_in_region(o, &region);
        let mut ok = true;
        let mut complete = 0;
        for f in &patch.faces {
            if f.complete {
                complete += 1;
                ok &= f.area.unwrap() <= std::f64::consts::PI + 1e-9;
            }
        }
        out.push(check(
            "tile areas within the bound",
            ok,
            format!("{} geodesics, {} complete faces", patch.geodesics.len(), complete),
        ));
    }

    out
}

fn wide_bound(o: &Origami, cd: &crate::veech::CuspData) -> Rat {
    let n = o.num_squares() as i64;
    let a = Rat::new(cd.period, cd.delta * cd.delta);
    let four_n2 = Rat::from_integer(4 * n * n);
    let first = four_n2 * (Rat::one() + (a + Rat::one()) * (a + Rat::one()));
    let second = four_n2 + Rat::new(cd.kappa * cd.kappa, 4 * cd.delta * cd.delta);
    first.max(second) * Rat::from_integer(4)
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check { name: name.to_string(), pass, detail }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::samples::*;

    #[test]
    fn torus_suite_passes() {
        let checks = run_suite(&torus(), &Caps { len2_cap: 8, ..Caps::default() });
        for c in &checks {
            assert!(c.pass, "failed: {} ({})", c.name, c.detail);
        }
    }
}
