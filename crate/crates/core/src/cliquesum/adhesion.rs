use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{search, sssp_through, Dist, Graph, UNREACHABLE};
use crate::range::{MaxMinIndex, DEFAULT_DIM_CAP};

/// Farthest-vertex distances across a separator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideMaxima {
    /// `max_{c ∈ C} dist(a, c)` for every `a` of the `A` side, in input order.
    pub a_side: Vec<Dist>,
    /// `max_{a ∈ A} dist(a, c)` for every `c` of the `C` side, in input order.
    pub c_side: Vec<Dist>,
}

/// For a partition `V = A ∪ B ∪ C` with no `A`-`C` edges, computes the
/// farthest `C` vertex from every `a ∈ A` and the farthest `A` vertex from
/// every `c ∈ C`, with one search per separator vertex and a max-min index.
pub fn single_adhesion_max_dist(g: &Graph, a: &[usize], b: &[usize], c: &[usize]) -> Result<SideMaxima> {
    Ok(single_adhesion_with_rows(g, a, b, c)?.0)
}

/// Same as [`single_adhesion_max_dist`], also returning the distance rows of
/// the separator vertices.
pub(crate) fn single_adhesion_with_rows(
    g: &Graph,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<(SideMaxima, Vec<Vec<Dist>>)> {
    if a.is_empty() {
        return Err(Error::EmptySide("A"));
    }
    if c.is_empty() {
        return Err(Error::EmptySide("C"));
    }
    let n = g.n();
    let mut side = vec![0u8; n];
    for (label, set) in [(1u8, a), (2, b), (3, c)] {
        for &v in set {
            g.check_vertex(v)?;
            if side[v] != 0 {
                return Err(Error::Precondition(format!("vertex {} is in two sides of the partition", v + 1)));
            }
            side[v] = label;
        }
    }
    if let Some(v) = side.iter().position(|&s| s == 0) {
        return Err(Error::Precondition(format!("vertex {} is in no side of the partition", v + 1)));
    }
    if a.iter().any(|&v| g.neighbors(v).any(|x| side[x] == 3)) {
        return Err(Error::Precondition("an edge joins the A and C sides".into()));
    }
    if b.is_empty() {
        return Err(Error::Disconnected);
    }
    if b.len() > DEFAULT_DIM_CAP {
        return Err(Error::DimensionCap { dim: b.len(), cap: DEFAULT_DIM_CAP });
    }
    let rows: Vec<Vec<Dist>> = b.par_iter().map(|&s| search(g, &[s], |_| true, |_| true)).collect();
    let point = |v: usize| -> Result<Vec<i64>> {
        rows.iter()
            .map(|row| match row[v] {
                UNREACHABLE => Err(Error::Disconnected),
                d => Ok(d as i64),
            })
            .collect()
    };
    let side_max = |from: &[usize], to: &[usize]| -> Result<Vec<Dist>> {
        let mut flat = Vec::with_capacity(to.len() * b.len());
        for &v in to {
            flat.extend(point(v)?);
        }
        let index = MaxMinIndex::build_flat(b.len(), &flat)?;
        from.iter()
            .map(|&u| Ok(index.query(&point(u)?)?.expect("target side is nonempty") as Dist))
            .collect()
    };
    let maxima = SideMaxima { a_side: side_max(a, c)?, c_side: side_max(c, a)? };
    Ok((maxima, rows))
}

/// Shortcut edges between `endpoints`: for each pair, one edge weighted by
/// the shortest path whose internal vertices all lie in `interior`. Pairs
/// without such a path get no edge.
pub fn shortcut_edges(g: &Graph, endpoints: &[usize], interior: &[bool]) -> Vec<(usize, usize, Dist)> {
    endpoints
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &u)| {
            let dist = sssp_through(g, u, interior);
            endpoints[i + 1..]
                .iter()
                .filter(|&&v| v != u && dist[v] != UNREACHABLE)
                .map(|&v| (u, v, dist[v]))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `G[A ∪ B]` plus a shortcut for every pair of `B` vertices joined by a path
/// through `C`. Returns the graph on local ids and the sorted vertex list
/// `A ∪ B` that maps local ids back.
pub fn shortcut_through(g: &Graph, a: &[usize], b: &[usize], c: &[usize]) -> Result<(Graph, Vec<usize>)> {
    let n = g.n();
    let mut interior = vec![false; n];
    for &v in c {
        g.check_vertex(v)?;
        interior[v] = true;
    }
    let mut kept: Vec<usize> = a.iter().chain(b).copied().collect();
    for &v in &kept {
        g.check_vertex(v)?;
        if interior[v] {
            return Err(Error::Precondition(format!("vertex {} is in two sides of the partition", v + 1)));
        }
    }
    kept.sort_unstable();
    kept.dedup();
    let (sub, local) = g.induced(&kept);
    let mut edges: Vec<(usize, usize, Dist)> = sub.edges().collect();
    for (u, v, w) in shortcut_edges(g, b, &interior) {
        edges.push((local[u].expect("kept"), local[v].expect("kept"), w));
    }
    Ok((Graph::from_edges(kept.len(), edges)?, kept))
}
