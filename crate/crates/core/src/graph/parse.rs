use std::fmt::Write as _;

use super::{Dist, Graph};
use crate::error::{Error, Result};

/// Parses the PACE-style `.gr` format: a `p tw <n> <m>` header, `c` comment
/// lines, and edge lines `<u> <v> [w]` with 1-based endpoints.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize, Dist)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        let Some(first) = tokens.next() else { continue };
        match first {
            "c" => continue,
            "p" => {
                if n.is_some() {
                    return Err(Error::parse(line, "duplicate header"));
                }
                if tokens.next() != Some("tw") {
                    return Err(Error::parse(line, "header must read `p tw <n> <m>`"));
                }
                let count = tokens
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(line, "missing vertex count"))?;
                tokens
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(line, "missing edge count"))?;
                if tokens.next().is_some() {
                    return Err(Error::parse(line, "trailing tokens in header"));
                }
                n = Some(count);
            }
            _ => {
                let n = n.ok_or_else(|| Error::parse(line, "edge before `p tw` header"))?;
                let u = parse_endpoint(first, line, n)?;
                let v = match tokens.next() {
                    Some(t) => parse_endpoint(t, line, n)?,
                    None => return Err(Error::parse(line, "edge line needs two endpoints")),
                };
                let w = match tokens.next() {
                    None => 1,
                    Some(t) => {
                        let w: i64 = t.parse().map_err(|_| Error::parse(line, format!("bad weight `{t}`")))?;
                        if w <= 0 {
                            return Err(Error::NonPositiveWeight { line });
                        }
                        w as Dist
                    }
                };
                if tokens.next().is_some() {
                    return Err(Error::parse(line, "too many tokens on edge line"));
                }
                edges.push((u, v, w));
            }
        }
    }

    let n = n.ok_or_else(|| Error::parse(0, "missing `p tw` header"))?;
    Graph::from_edges(n, edges)
}

fn parse_endpoint(token: &str, line: usize, n: usize) -> Result<usize> {
    let id: i64 = token.parse().map_err(|_| Error::parse(line, format!("bad vertex id `{token}`")))?;
    if id < 1 || id as u64 > n as u64 {
        return Err(Error::VertexOutOfRange { line, vertex: id, n });
    }
    Ok(id as usize - 1)
}

/// Writes `g` in the same format `parse_graph` reads. Weights are emitted only
/// for weighted graphs.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p tw {} {}", g.n(), g.m()).unwrap();
    for (u, v, w) in g.edges() {
        if g.is_weighted() {
            writeln!(out, "{} {} {}", u + 1, v + 1, w).unwrap();
        } else {
            writeln!(out, "{} {}", u + 1, v + 1).unwrap();
        }
    }
    out
}
