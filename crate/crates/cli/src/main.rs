//! Command-line interface: origami parsing, the geometric and
//! group-theoretic reports, tessellation drawings, and the verification
//! suite. All output is byte-deterministic; rationals in JSON are
//! `p/q` strings.

mod parse;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use parse::{parse_origami, serialize_origami};
use serde_json::json;
use std::path::Path;
use std::process::ExitCode;
use tessella::slope::{parse_rat, parse_slope, Rat, Slope};
use tessella::tess::render::{patch_json, render, Model};
use tessella::tess::{arr::faces_in_region, locate, Location, Region};
use tessella::Origami;

#[derive(Parser)]
#[command(
    name = "tessella",
    about = "Exact geometry of square-tiled surfaces: saddle connections, cylinders, embedded triangles, hyperbolic tessellations, and Veech groups",
    version
)]
struct Cli {
    /// Origami source: a file path or inline text/JSON (use ';' as a
    /// line separator in inline text).
    input: String,
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Write the primary output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Breadth-first orbit cap for the oracle.
    #[arg(long = "cap-orbit", default_value_t = 1_000_000, global = true)]
    cap_orbit: usize,
    /// Coset cap for the enumeration over the modular group.
    #[arg(long = "cap-coset", default_value_t = 1_000_000, global = true)]
    cap_coset: usize,
    /// Iteration cap for the domain exploration.
    #[arg(long = "cap-iter", default_value_t = 64, global = true)]
    cap_iter: usize,
    /// Worker threads for internal enumeration; results are identical
    /// for any value (the current implementation is single-threaded).
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    HalfPlane,
    Disk,
}

#[derive(Subcommand)]
enum Command {
    /// Surface summary: genus, vertex classes, markings.
    Info,
    /// Saddle connections up to a squared length bound.
    Sc {
        /// Squared length bound.
        #[arg(long, default_value = "8")]
        bound: String,
    },
    /// Cylinder decomposition in a rational direction.
    Cylinders {
        /// Direction slope `p/q` or `inf`.
        #[arg(long, default_value = "inf")]
        dir: String,
    },
    /// Embedded triangles with spanning connections up to a bound.
    Triangles {
        #[arg(long, default_value = "8")]
        bound: String,
    },
    /// Tessellation patch over a region: faces and a drawing.
    Tessellate {
        /// Region `x0,x1,y0,y1` with exact rational entries.
        #[arg(long, default_value = "0,1,1/4,2")]
        region: String,
        #[arg(long, value_enum, default_value = "half-plane")]
        model: ModelArg,
    },
    /// Locate a point of the upper half plane in the triangle family.
    Locate {
        /// Point `x,y` with exact rational entries.
        #[arg(long)]
        point: String,
    },
    /// Coarse fundamental domain: cusp classes and triangle classes.
    FundamentalDomain,
    /// Generating set of the Veech group with words and provenance.
    Generators,
    /// The quotient of the graph of periodic directions.
    QuotientGraph,
    /// Independent orbit oracle: group index and cusp count.
    Oracle,
    /// Runs the invariant suite and prints a pass/fail table.
    Verify,
    /// Local ball of the graph of periodic directions.
    Ball {
        #[arg(long, default_value = "inf")]
        dir: String,
        #[arg(long, default_value_t = 1)]
        radius: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            if cli.json {
                println!("{}", json!({ "error": msg }));
            } else {
                eprintln!("error: {}", msg);
            }
            ExitCode::FAILURE
        }
    }
}

fn load_origami(input: &str) -> Result<Origami, String> {
    let text = if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| format!("cannot read {}: {}", input, e))?
    } else {
        input.replace(';', "\n")
    };
    parse_origami(&text).map_err(|e| e.to_string())
}

fn parse_region(s: &str) -> Result<Region, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("region must be x0,x1,y0,y1".into());
    }
    let vals: Vec<Rat> = parts
        .iter()
        .map(|p| parse_rat(p).ok_or_else(|| format!("bad rational `{}`", p)))
        .collect::<Result<_, _>>()?;
    Region::new(vals[0], vals[1], vals[2], vals[3]).map_err(|e| e.to_string())
}

fn parse_dir(s: &str) -> Result<Slope, String> {
    parse_slope(s).ok_or_else(|| format!("bad direction `{}` (use p/q or inf)", s))
}

fn emit(cli: &Cli, text: String) -> Result<(), String> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), String> {
    let o = load_origami(&cli.input)?;
    match &cli.command {
        Command::Info => info(cli, &o),
        Command::Sc { bound } => sc(cli, &o, bound),
        Command::Cylinders { dir } => cylinders(cli, &o, dir),
        Command::Triangles { bound } => triangles(cli, &o, bound),
        Command::Tessellate { region, model } => tessellate(cli, &o, region, *model),
        Command::Locate { point } => cmd_locate(cli, &o, point),
        Command::FundamentalDomain => fundamental_domain(cli, &o),
        Command::Generators => generators(cli, &o),
        Command::QuotientGraph => quotient(cli, &o),
        Command::Oracle => oracle(cli, &o),
        Command::Verify => verify(cli, &o),
        Command::Ball { dir, radius } => ball(cli, &o, dir, *radius),
    }
}

fn info(cli: &Cli, o: &Origami) -> Result<(), String> {
    if cli.json {
        let classes: Vec<_> = o
            .vertex_classes()
            .iter()
            .map(|c| {
                json!({
                    "angle_turns": c.turns,
                    "marked": c.marked,
                    "corners": c.corners.len(),
                })
            })
            .collect();
        let v = json!({
            "squares": o.num_squares(),
            "genus": o.genus(),
            "vertex_classes": classes,
            "text": serialize_origami(o),
        });
        emit(cli, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
    } else {
        let mut s = String::new();
        s.push_str(&serialize_origami(o));
        s.push_str(&format!("genus={}\n", o.genus()));
        for c in o.vertex_classes() {
            s.push_str(&format!(
                "vertex class {}: angle {} pi{}\n",
                c.id + 1,
                c.turns * 2,
                if c.marked { ", marked" } else { "" }
            ));
        }
        emit(cli, s)
    }
}

fn sc(cli: &Cli, o: &Origami, bound: &str) -> Result<(), String> {
    let l2 = parse_rat(bound)
        .filter(|r| r.is_integer() && r.is_positive())
        .ok_or("bound must be a positive integer")?;
    let scs = tessella::geom::saddle_connections_up_to(o, *l2.numer());
    if cli.json {
        let items: Vec<_> = scs
            .iter()
            .map(|sc| {
                json!({
                    "holonomy": [sc.fwd.holonomy().0, sc.fwd.holonomy().1],
                    "len2": sc.len2(),
                    "slope": format!("{}", sc.slope()),
                    "start_square": sc.fwd.start.square + 1,
                    "start_corner": sc.fwd.start.corner.name(),
                })
            })
            .collect();
        emit(
            cli,
            format!(
                "{}\n",
                serde_json::to_string_pretty(
                    &json!({"count": scs.len(), "connections": items})
                )
                .unwrap()
            ),
        )
    } else {
        let mut s = format!("{} saddle connections with |v|^2 <= {}\n", scs.len(), l2.numer());
        for sc in &scs {
            s.push_str(&format!(
                "  ({:>3},{:>3})  len2={:<4} slope={}\n",
                sc.fwd.holonomy().0,
                sc.fwd.holonomy().1,
                sc.len2(),
                sc.slope()
            ));
        }
        emit(cli, s)
    }
}

fn cylinders(cli: &Cli, o: &Origami, dir: &str) -> Result<(), String> {
    let k = parse_dir(dir)?;
    let d = tessella::geom::cylinder_decomposition(o, k);
    if cli.json {
        let items: Vec<_> = d
            .cylinders
            .iter()
            .map(|c| {
                json!({
                    "circumference": c.circumference,
                    "height": c.height,
                    "squares": c.core_squares.iter().map(|s| s + 1).collect::<Vec<_>>(),
                    "boundary_bottom": c.boundary_bottom,
                    "boundary_top": c.boundary_top,
                })
            })
            .collect();
        emit(
            cli,
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "direction": format!("{}", k),
                    "cylinders": items,
                    "connections": d.saddle_connections.len(),
                }))
                .unwrap()
            ),
        )
    } else {
        let mut s = format!("direction {}: {} cylinder(s)\n", k, d.cylinders.len());
        for (i, c) in d.cylinders.iter().enumerate() {
            s.push_str(&format!(
                "  cylinder {}: circumference={} height={} squares={:?}\n",
                i + 1,
                c.circumference,
                c.height,
                c.core_squares.iter().map(|s| s + 1).collect::<Vec<_>>()
            ));
        }
        emit(cli, s)
    }
}

fn triangles(cli: &Cli, o: &Origami, bound: &str) -> Result<(), String> {
    let l2 = parse_rat(bound)
        .filter(|r| r.is_integer() && r.is_positive())
        .ok_or("bound must be a positive integer")?;
    let scs = tessella::geom::saddle_connections_up_to(o, *l2.numer());
    let mut seen: std::collections::BTreeMap<tessella::triangle::IdealTriangle, (i64, usize)> =
        Default::default();
    for i in 0..scs.len() {
        for j in 0..scs.len() {
            for a in [scs[i].fwd.clone(), scs[i].rev(o)] {
                for b in [scs[j].fwd.clone(), scs[j].rev(o)] {
                    if o.class_of(a.start) != o.class_of(b.start)
                        || tessella::slope::det2(a.holonomy(), b.holonomy()) <= 0
                    {
                        continue;
                    }
                    if let Ok(t) = tessella::triangle::embed_check(o, &a, &b) {
                        let e = seen.entry(t.ideal()).or_insert((t.area2(), 0));
                        e.1 += 1;
                    }
                }
            }
        }
    }
    if cli.json {
        let items: Vec<_> = seen
            .iter()
            .map(|(ideal, (area2, wit))| {
                json!({
                    "vertices": ideal.slopes.iter().map(|s| format!("{}", s)).collect::<Vec<_>>(),
                    "area2": area2,
                    "witnesses": wit,
                })
            })
            .collect();
        emit(
            cli,
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({"count": seen.len(), "triangles": items}))
                    .unwrap()
            ),
        )
    } else {
        let mut s = format!(
            "{} ideal triangles from spanning connections with |v|^2 <= {}\n",
            seen.len(),
            l2.numer()
        );
        for (ideal, (area2, wit)) in &seen {
            s.push_str(&format!("  {:?}  area2={} witnesses={}\n", ideal, area2, wit));
        }
        emit(cli, s)
    }
}

fn tessellate(cli: &Cli, o: &Origami, region: &str, model: ModelArg) -> Result<(), String> {
    let region = parse_region(region)?;
    let patch = faces_in_region(o, &region);
    let m = match model {
        ModelArg::HalfPlane => Model::HalfPlane,
        ModelArg::Disk => Model::Disk,
    };
    let svg = render(&patch, m);
    if cli.json {
        let mut v = patch_json(&patch);
        v["svg"] = json!(svg);
        emit(cli, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
    } else if cli.out.is_some() {
        // Drawing to the file, summary to stdout.
        emit(cli, svg)?;
        println!(
            "{} geodesics, {} faces ({} complete)",
            patch.geodesics.len(),
            patch.faces.len(),
            patch.faces.iter().filter(|f| f.complete).count()
        );
        Ok(())
    } else {
        emit(cli, svg)
    }
}

fn cmd_locate(cli: &Cli, o: &Origami, point: &str) -> Result<(), String> {
    let parts: Vec<&str> = point.split(',').collect();
    if parts.len() != 2 {
        return Err("point must be x,y".into());
    }
    let x = parse_rat(parts[0]).ok_or("bad x coordinate")?;
    let y = parse_rat(parts[1]).filter(|v| v.is_positive()).ok_or("y must be positive")?;
    let loc = locate(o, x, y);
    if cli.json {
        let v = match &loc {
            Location::Interior(t) => json!({
                "kind": "interior",
                "triangle": t.slopes.iter().map(|s| format!("{}", s)).collect::<Vec<_>>(),
            }),
            Location::OnEdge(t1, t2, g) => json!({
                "kind": "edge",
                "edge": [format!("{}", g.a), format!("{}", g.b)],
                "triangles": [
                    t1.slopes.iter().map(|s| format!("{}", s)).collect::<Vec<_>>(),
                    t2.slopes.iter().map(|s| format!("{}", s)).collect::<Vec<_>>(),
                ],
            }),
        };
        emit(cli, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
    } else {
        let s = match &loc {
            Location::Interior(t) => format!("interior of {:?}\n", t),
            Location::OnEdge(t1, t2, g) => {
                format!("on the edge ({}, {}) between {:?} and {:?}\n", g.a, g.b, t1, t2)
            }
        };
        emit(cli, s)
    }
}

fn fundamental_domain(cli: &Cli, o: &Origami) -> Result<(), String> {
    let fd = tessella::veech::coarse_domain_capped(o, cli.cap_iter).map_err(|e| e.to_string())?;
    if cli.json {
        let cusps: Vec<_> = fd
            .cusps
            .iter()
            .map(|c| {
                json!({
                    "direction": format!("{}", c.data.rep),
                    "generation": c.generation,
                    "period": c.data.period,
                    "shortest": c.data.delta,
                    "longest": c.data.kappa,
                    "stabilizer": c.data.stabilizer.entries(),
                    "triangles": c.data.triangles.iter()
                        .map(|t| t.slopes.iter().map(|s| format!("{}", s)).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        let v = json!({
            "depth": fd.depth,
            "cusps": cusps,
            "triangle_classes": fd.triangle_classes.iter()
                .map(|t| t.slopes.iter().map(|s| format!("{}", s)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "domain_triangles": fd.domain_triangles.len(),
        });
        emit(cli, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
    } else {
        let mut s = format!(
            "depth={} cusp_classes={} triangle_classes={} domain_triangles={}\n",
            fd.depth,
            fd.cusps.len(),
            fd.triangle_classes.len(),
            fd.domain_triangles.len()
        );
        for c in &fd.cusps {
            s.push_str(&format!(
                "  cusp {} (generation {}): period={} triangles={}\n",
                c.data.rep,
                c.generation,
                c.data.period,
                c.data.triangles.len()
            ));
        }
        emit(cli, s)
    }
}

fn generators(cli: &Cli, o: &Origami) -> Result<(), String> {
    let fd = tessella::veech::coarse_domain_capped(o, cli.cap_iter).map_err(|e| e.to_string())?;
    let gens = tessella::veech::generator_set_from(o, &fd);
    if cli.json {
        let items: Vec<_> = gens
            .generators
            .iter()
            .map(|g| {
                json!({
                    "matrix": g.element.entries(),
                    "word": format!("{}", g.word),
                    "provenance": match &g.provenance {
                        tessella::veech::Provenance::CuspStabilizer(k) =>
                            format!("stabilizer of cusp {}", k),
                        tessella::veech::Provenance::MapsHorizontalTo(k) =>
                            format!("maps inf to {}", k),
                    },
                })
            })
            .collect();
        let v = json!({
            "iterations": gens.iterations,
            "count": gens.generators.len(),
            "generators": items,
        });
        emit(cli, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
    } else {
        let mut s = format!(
            "{} generators after {} rounds\n",
            gens.generators.len(),
            gens.iterations
        );
        for g in &gens.generators {
            let p = match &g.provenance {
                tessella::veech::Provenance::CuspStabilizer(k) => format!("stab {}", k),
                tessella::veech::Provenance::MapsHorizontalTo(k) => format!("inf -> {}", k),
            };
            s.push_str(&format!("  {}  [{}]  {}\n", g.element, p, g.word));
        }
        emit(cli, s)
    }
}

fn quotient(cli: &Cli, o: &Origami) -> Result<(), String> {
    let fd = tessella::veech::coarse_domain_capped(o, cli.cap_iter).map_err(|e| e.to_string())?;
    let qg = tessella::graph::quotient_graph_from(o, &fd);
    if cli.json {
        let v = json!({
            "V": qg.cusps.len(),
            "W": qg.triangle_classes.len(),
            "E": qg.edge_count(),
            "cusps": qg.cusps.iter().map(|(k, g)| json!({
                "direction": format!("{}", k), "generation": g,
            })).collect::<Vec<_>>(),
            "stabilizer_orders": qg.stabilizer_orders,
            "distances": qg.distances,
            "dot": qg.to_dot(),
        });
        emit(cli, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
    } else if cli.out.is_some() {
        emit(cli, qg.to_dot())?;
        println!("V={} W={} E={}", qg.cusps.len(), qg.triangle_classes.len(), qg.edge_count());
        Ok(())
    } else {
        emit(
            cli,
            format!(
                "V={} W={} E={}\n",
                qg.cusps.len(),
                qg.triangle_classes.len(),
                qg.edge_count()
            ),
        )
    }
}

fn oracle(cli: &Cli, o: &Origami) -> Result<(), String> {
    let r = tessella::veech::oracle_orbit(o, cli.cap_orbit).map_err(|e| e.to_string())?;
    if cli.json {
        let v = json!({ "index": r.index, "cusps": r.cusp_count });
        emit(cli, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
    } else {
        emit(cli, format!("index={} cusps={}\n", r.index, r.cusp_count))
    }
}

fn verify(cli: &Cli, o: &Origami) -> Result<(), String> {
    let caps = tessella::verify::Caps {
        orbit_cap: cli.cap_orbit,
        coset_cap: cli.cap_coset,
        iteration_cap: cli.cap_iter,
        ..Default::default()
    };
    let checks = tessella::verify::run_suite(o, &caps);
    let all = tessella::verify::all_pass(&checks);
    if cli.json {
        let v = json!({
            "pass": all,
            "checks": checks.iter().map(|c| json!({
                "name": c.name, "pass": c.pass, "detail": c.detail,
            })).collect::<Vec<_>>(),
        });
        emit(cli, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))?;
    } else {
        let mut s = String::new();
        for c in &checks {
            s.push_str(&format!(
                "[{}] {}{}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }
            ));
        }
        s.push_str(&format!("{}\n", if all { "all checks passed" } else { "FAILURES present" }));
        emit(cli, s)?;
    }
    if all {
        Ok(())
    } else {
        Err("verification failed".into())
    }
}

fn ball(cli: &Cli, o: &Origami, dir: &str, radius: u32) -> Result<(), String> {
    let k = parse_dir(dir)?;
    let b = tessella::graph::local_ball(o, k, radius, 2).map_err(|e| e.to_string())?;
    if cli.json {
        let v = json!({
            "center": format!("{}", b.center),
            "radius": b.radius,
            "slopes": b.slopes.iter().map(|s| format!("{}", s)).collect::<Vec<_>>(),
            "triangles": b.triangles.iter()
                .map(|t| t.slopes.iter().map(|s| format!("{}", s)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "edges": b.edges,
            "truncated": b.truncated,
            "dot": b.to_dot(),
        });
        emit(cli, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
    } else if cli.out.is_some() {
        emit(cli, b.to_dot())?;
        println!("slopes={} triangles={}", b.slopes.len(), b.triangles.len());
        Ok(())
    } else {
        emit(
            cli,
            format!(
                "center={} radius={} slopes={} triangles={} truncated={}\n",
                b.center,
                b.radius,
                b.slopes.len(),
                b.triangles.len(),
                b.truncated
            ),
        )
    }
}
