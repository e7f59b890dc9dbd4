//! Deterministic vector drawings of tessellation patches, in the half
//! plane or mapped to the unit disk. The only floating point in the
//! crate's output lives here.

use super::arr::Patch;
use super::Shape;
use crate::slope::Rat;
use std::fmt::Write;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Model {
    HalfPlane,
    Disk,
}

fn f(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn fmt(v: f64) -> String {
    format!("{:.6}", v)
}

/// Renders the patch as a standalone vector drawing. One path or line
/// element per geodesic; identical inputs produce identical bytes.
pub fn render(patch: &Patch, model: Model) -> String {
    match model {
        Model::HalfPlane => render_half_plane(patch),
        Model::Disk => render_disk(patch),
    }
}

fn render_half_plane(patch: &Patch) -> String {
    let r = &patch.region;
    let (x0, x1) = (f(r.x0), f(r.x1));
    let (y0, y1) = (f(r.y0), f(r.y1));
    let pad = 0.05 * (x1 - x0).max(y1 - y0);
    let scale = 400.0 / (x1 - x0).max(1e-9);
    // Flip the vertical axis: the drawing's y grows downward.
    let tx = |x: f64| (x - x0 + pad) * scale;
    let ty = |y: f64| (y1 + pad - y) * scale;
    let w = tx(x1 + pad);
    let h = ty(y0 - pad);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        fmt(w),
        fmt(h),
        fmt(w),
        fmt(h)
    );
    let _ = writeln!(
        s,
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>",
        fmt(tx(x0)),
        fmt(ty(y1)),
        fmt(tx(x1) - tx(x0)),
        fmt(ty(y0) - ty(y1))
    );
    for g in &patch.geodesics {
        match g.shape() {
            Shape::Vertical { x } => {
                let xx = f(x);
                let _ = writeln!(
                    s,
                    "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" stroke-width=\"1\" fill=\"none\"/>",
                    fmt(tx(xx)),
                    fmt(ty(y1 + pad)),
                    fmt(tx(xx)),
                    fmt(ty(0.0))
                );
            }
            Shape::Arc { c, r: rad } => {
                let cc = f(c);
                let rr = f(rad);
                let _ = writeln!(
                    s,
                    "  <path d=\"M {} {} A {} {} 0 0 1 {} {}\" stroke=\"#000000\" stroke-width=\"1\" fill=\"none\"/>",
                    fmt(tx(cc - rr)),
                    fmt(ty(0.0)),
                    fmt(rr * scale),
                    fmt(rr * scale),
                    fmt(tx(cc + rr)),
                    fmt(ty(0.0))
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Boundary point of the half plane mapped to the unit circle via
/// `z -> (z - i)/(z + i)`.
fn boundary_to_disk(k: Option<f64>) -> (f64, f64) {
    match k {
        None => (1.0, 0.0), // infinity
        Some(x) => {
            // (x - i)/(x + i) = ((x^2 - 1) - 2 x i) / (x^2 + 1).
            let d = x * x + 1.0;
            ((x * x - 1.0) / d, -2.0 * x / d)
        }
    }
}

fn render_disk(patch: &Patch) -> String {
    let size = 440.0;
    let cpt = size / 2.0;
    let radius = 200.0;
    let t = |p: (f64, f64)| (cpt + radius * p.0, cpt - radius * p.1);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        fmt(size),
        fmt(size),
        fmt(size),
        fmt(size)
    );
    let _ = writeln!(
        s,
        "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>",
        fmt(cpt),
        fmt(cpt),
        fmt(radius)
    );
    for g in &patch.geodesics {
        let a = boundary_to_disk(g.a.value().map(f));
        let b = boundary_to_disk(g.b.value().map(f));
        let (pa, pb) = (t(a), t(b));
        // Geodesics in the disk: circular arcs orthogonal to the unit
        // circle, or a diameter when the endpoints are antipodal.
        let dot = a.0 * b.0 + a.1 * b.1;
        if (1.0 + dot).abs() < 1e-12 {
            let _ = writeln!(
                s,
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" stroke-width=\"1\" fill=\"none\"/>",
                fmt(pa.0),
                fmt(pa.1),
                fmt(pb.0),
                fmt(pb.1)
            );
        } else {
            // Center (a + b)/(1 + a.b), squared radius |c|^2 - 1.
            let cx = (a.0 + b.0) / (1.0 + dot);
            let cy = (a.1 + b.1) / (1.0 + dot);
            let r2 = cx * cx + cy * cy - 1.0;
            let rr = r2.max(0.0).sqrt() * radius;
            // Sweep flag: draw the arc on the side inside the disk.
            let cross = (b.0 - a.0) * (cy - a.1) - (b.1 - a.1) * (cx - a.0);
            let sweep = if cross > 0.0 { 0 } else { 1 };
            let _ = writeln!(
                s,
                "  <path d=\"M {} {} A {} {} 0 0 {} {} {}\" stroke=\"#000000\" stroke-width=\"1\" fill=\"none\"/>",
                fmt(pa.0),
                fmt(pa.1),
                fmt(rr),
                fmt(rr),
                sweep,
                fmt(pb.0),
                fmt(pb.1)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// JSON export of a patch with all rationals as `p/q` strings.
pub fn patch_json(patch: &Patch) -> serde_json::Value {
    use crate::slope::rat_string;
    let region = serde_json::json!({
        "x0": rat_string(patch.region.x0),
        "x1": rat_string(patch.region.x1),
        "y0": rat_string(patch.region.y0),
        "y1": rat_string(patch.region.y1),
    });
    // Endpoint slopes as primitive integer pairs [x1, y1, x2, y2].
    let geodesics: Vec<serde_json::Value> = patch
        .geodesics
        .iter()
        .map(|g| serde_json::json!([g.a.x, g.a.y, g.b.x, g.b.y]))
        .collect();
    let faces: Vec<serde_json::Value> = patch
        .faces
        .iter()
        .map(|f| {
            serde_json::json!({
                "ideal_vertices": f.ideal_vertices.iter().map(slope_json).collect::<Vec<_>>(),
                "interior_vertices": f.interior_vertices.iter().map(|(x, y2)| {
                    serde_json::json!({"x": rat_string(*x), "y2": rat_string(*y2)})
                }).collect::<Vec<_>>(),
                "sides": f.side_count,
                "touches_boundary": f.touches_boundary,
                "complete": f.complete,
                "area": f.area,
            })
        })
        .collect();
    serde_json::json!({
        "region": region,
        "geodesics": geodesics,
        "faces": faces,
    })
}

fn slope_json(k: &crate::slope::Slope) -> serde_json::Value {
    serde_json::Value::String(format!("{}", k))
}

#[cfg(test)]
mod tests {
    use super::super::arr::faces_in_region;
    use super::super::Region;
    use super::*;
    use crate::origami::samples::*;
    use num_traits::{One, Zero};

    #[test]
    fn drawing_is_deterministic_with_one_arc_per_geodesic() {
        let t = torus();
        let region =
            Region::new(Rat::zero(), Rat::one(), Rat::new(1, 2), Rat::from_integer(2)).unwrap();
        let patch = faces_in_region(&t, &region);
        let svg1 = render(&patch, Model::HalfPlane);
        let svg2 = render(&patch, Model::HalfPlane);
        assert_eq!(svg1, svg2);
        let arcs = svg1.matches("<path").count() + svg1.matches("<line").count();
        assert_eq!(arcs, patch.geodesics.len());
        let disk = render(&patch, Model::Disk);
        assert!(disk.contains("<circle"));
        assert!(disk.len() > 100);
    }
}
