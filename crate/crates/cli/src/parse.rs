//! Parsing and serialization of the origami text and JSON formats.
//!
//! Text format, one field per line, whitespace-insensitive:
//!
//! ```text
//! n=3
//! h=(1 2)
//! v=(1 3)
//! marked=singular
//! ```
//!
//! Cycles use 1-based squares with fixed points omissible; `marked` is
//! `singular`, `all`, or a list of corners like `(1,sw)(3,ne)`.

use std::fmt;
use tessella::origami::{BuildError, Corner, Marking, Sector};
use tessella::{Origami, Perm};

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

pub fn parse_origami(text: &str) -> Result<Origami, ParseError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return parse_json(trimmed);
    }
    let mut n: Option<usize> = None;
    let mut h: Option<Vec<Vec<usize>>> = None;
    let mut v: Option<Vec<Vec<usize>>> = None;
    let mut marked: Option<MarkSpec> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let (key, value) = match s.split_once('=') {
            Some(kv) => kv,
            None => return err(line, 1, "expected key=value"),
        };
        match key.trim() {
            "n" => match value.trim().parse::<usize>() {
                Ok(x) if x >= 1 => n = Some(x),
                _ => return err(line, key.len() + 2, "n must be a positive integer"),
            },
            "h" => h = Some(parse_cycles(value, line)?),
            "v" => v = Some(parse_cycles(value, line)?),
            "marked" => marked = Some(parse_marking(value, line)?),
            other => return err(line, 1, format!("unknown field `{}`", other)),
        }
    }
    let n = match n {
        Some(n) => n,
        None => return err(1, 1, "missing field n"),
    };
    let build = |cycles: &[Vec<usize>], name: &str| -> Result<Perm, ParseError> {
        let zero_based: Vec<Vec<usize>> = cycles
            .iter()
            .map(|cy| cy.iter().map(|&x| x.wrapping_sub(1)).collect())
            .collect();
        match Perm::from_cycles(n, &zero_based) {
            Some(p) => Ok(p),
            None => err(1, 1, format!("{} is not a permutation of 1..{}", name, n)),
        }
    };
    let h = build(&h.ok_or_else(|| ParseError { line: 1, column: 1, message: "missing field h".into() })?, "h")?;
    let v = build(&v.ok_or_else(|| ParseError { line: 1, column: 1, message: "missing field v".into() })?, "v")?;
    let marking = match marked.unwrap_or(MarkSpec::All) {
        MarkSpec::Singular => Marking::Singular,
        MarkSpec::All => Marking::All,
        MarkSpec::List(list) => Marking::Explicit(
            list.into_iter().map(|(sq, c)| Sector::new(sq - 1, c)).collect(),
        ),
    };
    Origami::build(n, h, v, &marking).map_err(|e| build_error(e))
}

enum MarkSpec {
    Singular,
    All,
    List(Vec<(usize, Corner)>),
}

fn build_error(e: BuildError) -> ParseError {
    ParseError { line: 0, column: 0, message: format!("invalid surface: {}", e) }
}

fn parse_cycles(value: &str, line: usize) -> Result<Vec<Vec<usize>>, ParseError> {
    let mut cycles = Vec::new();
    let mut cur: Option<Vec<usize>> = None;
    let mut num = String::new();
    for (ci, ch) in value.chars().enumerate() {
        let column = ci + 1;
        match ch {
            '(' => {
                if cur.is_some() {
                    return err(line, column, "nested parenthesis");
                }
                cur = Some(Vec::new());
            }
            ')' => match cur.take() {
                Some(mut cy) => {
                    flush_num(&mut num, &mut cy, line, column)?;
                    if !cy.is_empty() {
                        cycles.push(cy);
                    }
                }
                None => return err(line, column, "unbalanced parenthesis"),
            },
            c if c.is_ascii_digit() => {
                if cur.is_none() {
                    return err(line, column, "digit outside parentheses");
                }
                num.push(c);
            }
            c if c.is_whitespace() || c == ',' => {
                if let Some(cy) = cur.as_mut() {
                    flush_num(&mut num, cy, line, column)?;
                }
            }
            _ => return err(line, column, format!("unexpected character `{}`", ch)),
        }
    }
    if cur.is_some() {
        return err(line, value.len(), "unbalanced parenthesis");
    }
    Ok(cycles)
}

fn flush_num(
    num: &mut String,
    cy: &mut Vec<usize>,
    line: usize,
    column: usize,
) -> Result<(), ParseError> {
    if num.is_empty() {
        return Ok(());
    }
    match num.parse::<usize>() {
        Ok(x) if x >= 1 => {
            cy.push(x);
            num.clear();
            Ok(())
        }
        _ => err(line, column, "squares are numbered from 1"),
    }
}

fn parse_marking(value: &str, line: usize) -> Result<MarkSpec, ParseError> {
    let v = value.trim();
    match v {
        "singular" => return Ok(MarkSpec::Singular),
        "all" => return Ok(MarkSpec::All),
        _ => {}
    }
    // A list of (square, corner) pairs.
    let mut out = Vec::new();
    for part in v.split(')') {
        let part = part.trim().trim_start_matches('(').trim();
        if part.is_empty() {
            continue;
        }
        let (sq, corner) = match part.split_once(',') {
            Some(x) => x,
            None => return err(line, 1, "marking entries look like (1,sw)"),
        };
        let sq: usize = match sq.trim().parse() {
            Ok(x) if x >= 1 => x,
            _ => return err(line, 1, "squares are numbered from 1"),
        };
        let corner = match Corner::parse(corner.trim()) {
            Some(c) => c,
            None => return err(line, 1, "corners are sw, se, ne, nw"),
        };
        out.push((sq, corner));
    }
    if out.is_empty() {
        return err(line, 1, "empty marking list");
    }
    Ok(MarkSpec::List(out))
}

fn parse_json(text: &str) -> Result<Origami, ParseError> {
    let val: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| ParseError { line: e.line(), column: e.column(), message: e.to_string() })?;
    let n = val["n"].as_u64().filter(|&x| x >= 1).ok_or(ParseError {
        line: 1,
        column: 1,
        message: "field n must be a positive integer".into(),
    })? as usize;
    let perm = |field: &str| -> Result<Perm, ParseError> {
        let arr = val[field].as_array().ok_or(ParseError {
            line: 1,
            column: 1,
            message: format!("field {} must be an array", field),
        })?;
        if arr.iter().all(|x| x.is_u64()) {
            // Image array, 1-based.
            let img: Vec<usize> =
                arr.iter().map(|x| x.as_u64().unwrap() as usize - 1).collect();
            let p = Perm(img);
            if p.len() == n && p.is_valid() {
                Ok(p)
            } else {
                err(1, 1, format!("{} is not a permutation of 1..{}", field, n))
            }
        } else {
            let cycles: Option<Vec<Vec<usize>>> = arr
                .iter()
                .map(|cy| {
                    cy.as_array().map(|v| {
                        v.iter()
                            .filter_map(|x| x.as_u64().map(|u| u as usize - 1))
                            .collect::<Vec<usize>>()
                    })
                })
                .collect();
            cycles
                .and_then(|c| Perm::from_cycles(n, &c))
                .ok_or(ParseError {
                    line: 1,
                    column: 1,
                    message: format!("{} is not a permutation of 1..{}", field, n),
                })
        }
    };
    let h = perm("h")?;
    let v = perm("v")?;
    let marking = match &val["marked"] {
        serde_json::Value::String(s) if s == "singular" => Marking::Singular,
        serde_json::Value::String(s) if s == "all" => Marking::All,
        serde_json::Value::Array(list) => {
            let mut sectors = Vec::new();
            for item in list {
                let pair = item.as_array().filter(|a| a.len() == 2).ok_or(ParseError {
                    line: 1,
                    column: 1,
                    message: "marked entries look like [1, \"sw\"]".into(),
                })?;
                let sq = pair[0].as_u64().filter(|&x| x >= 1).ok_or(ParseError {
                    line: 1,
                    column: 1,
                    message: "squares are numbered from 1".into(),
                })? as usize;
                let c = pair[1]
                    .as_str()
                    .and_then(Corner::parse)
                    .ok_or(ParseError {
                        line: 1,
                        column: 1,
                        message: "corners are sw, se, ne, nw".into(),
                    })?;
                sectors.push(Sector::new(sq - 1, c));
            }
            Marking::Explicit(sectors)
        }
        serde_json::Value::Null => Marking::All,
        _ => {
            return err(1, 1, "field marked must be \"singular\", \"all\", or a list");
        }
    };
    Origami::build(n, h, v, &marking).map_err(build_error)
}

/// Serializes a surface back to the text format; the result parses to
/// an isomorphic surface.
pub fn serialize_origami(o: &Origami) -> String {
    let marked: Vec<String> = o
        .vertex_classes()
        .iter()
        .filter(|c| c.marked)
        .map(|c| {
            let s = c.corners[0];
            format!("({},{})", s.square + 1, s.corner.name())
        })
        .collect();
    format!(
        "n={}\nh={}\nv={}\nmarked={}\n",
        o.num_squares(),
        o.h().cycle_string(),
        o.v().cycle_string(),
        marked.join(" ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_from_text() {
        let o = parse_origami("n=1\nh=()\nv=()\nmarked=all").unwrap();
        assert_eq!(o.num_squares(), 1);
        assert_eq!(o.vertex_classes().len(), 1);
    }

    #[test]
    fn l_shape_from_text() {
        let o = parse_origami("n=3\nh=(1 2)\nv=(1 3)\nmarked=singular").unwrap();
        assert_eq!(o.vertex_classes().len(), 1);
        assert_eq!(o.vertex_classes()[0].turns, 3);
    }

    #[test]
    fn unbalanced_parenthesis() {
        assert!(parse_origami("n=3\nh=(1 2\nv=()\nmarked=all").is_err());
    }

    #[test]
    fn json_round_trip() {
        let o =
            parse_origami("{\"n\":3,\"h\":[[1,2]],\"v\":[[1,3]],\"marked\":\"singular\"}").unwrap();
        let text = serialize_origami(&o);
        let p = parse_origami(&text).unwrap();
        assert!(o.is_isomorphic(&p));
    }

    #[test]
    fn image_array_json() {
        let o = parse_origami("{\"n\":2,\"h\":[2,1],\"v\":[1,2],\"marked\":\"all\"}").unwrap();
        assert_eq!(o.num_squares(), 2);
    }
}
