//! Brute-force references and seeded instance generators.
//!
//! Generators use ChaCha8 seeded with `seed`, so instances are identical on
//! every platform.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cliquesum::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{search, Dist, Graph, UNREACHABLE};
use crate::profiles::gen_profile_gadget;

/// Largest graph the all-pairs oracle accepts by default.
pub const APSP_CAP: usize = 3000;

/// All-pairs distances by one search per vertex.
pub fn apsp_naive(g: &Graph) -> Result<Vec<Vec<Dist>>> {
    apsp_naive_with_cap(g, APSP_CAP)
}

pub fn apsp_naive_with_cap(g: &Graph, cap: usize) -> Result<Vec<Vec<Dist>>> {
    if g.n() > cap {
        return Err(Error::CapExceeded { n: g.n(), cap });
    }
    Ok((0..g.n()).map(|s| search(g, &[s], |_| true, |_| true)).collect())
}

/// All-pairs distances by Floyd–Warshall.
pub fn floyd_warshall(g: &Graph) -> Result<Vec<Vec<Dist>>> {
    let n = g.n();
    if n > APSP_CAP {
        return Err(Error::CapExceeded { n, cap: APSP_CAP });
    }
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v, w) in g.edges() {
        d[u][v] = d[u][v].min(w);
        d[v][u] = d[v][u].min(w);
    }
    for k in 0..n {
        let via = d[k].clone();
        for row in d.iter_mut() {
            let dik = row[k];
            if dik == UNREACHABLE {
                continue;
            }
            for (x, &dkj) in row.iter_mut().zip(&via) {
                if dkj != UNREACHABLE && dik + dkj < *x {
                    *x = dik + dkj;
                }
            }
        }
    }
    Ok(d)
}

/// Largest weight of a point dominating `r` coordinatewise, by scanning.
pub fn rangequery_naive(points: &[Vec<i64>], weights: &[i64], r: &[i64]) -> Option<i64> {
    points
        .iter()
        .zip(weights)
        .filter(|(p, _)| p.iter().zip(r).all(|(x, y)| x >= y))
        .map(|(_, &w)| w)
        .max()
}

/// `max_v min_i (v_i + r_i)` by scanning.
pub fn maxmin_naive(points: &[Vec<i64>], r: &[i64]) -> Option<i64> {
    points
        .iter()
        .map(|p| p.iter().zip(r).map(|(x, y)| x + y).min().expect("dimension is at least 1"))
        .max()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Path,
    Cycle,
    Grid,
    RandomPlanarMesh,
    GridPlusApices(usize),
    ProfileGadget(usize),
    CliquesumChain,
    StarGlue,
}

impl FromStr for InstanceKind {
    type Err = Error;

    /// Kind names, with the parameter after a colon where one applies:
    /// `grid_plus_apices:2`, `profile_gadget:3`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (s, None),
        };
        let number = |default: usize| -> Result<usize> {
            match arg {
                None => Ok(default),
                Some(a) => a
                    .parse()
                    .map_err(|_| Error::Precondition(format!("bad parameter '{a}' for instance kind {name}"))),
            }
        };
        let kind = match name {
            "path" => InstanceKind::Path,
            "cycle" => InstanceKind::Cycle,
            "grid" => InstanceKind::Grid,
            "random_planar_mesh" => InstanceKind::RandomPlanarMesh,
            "grid_plus_apices" => InstanceKind::GridPlusApices(number(2)?),
            "profile_gadget" => InstanceKind::ProfileGadget(number(3)?),
            "cliquesum_chain" => InstanceKind::CliquesumChain,
            "star_glue" => InstanceKind::StarGlue,
            _ => return Err(Error::Precondition(format!("unknown instance kind '{s}'"))),
        };
        Ok(kind)
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceKind::Path => f.write_str("path"),
            InstanceKind::Cycle => f.write_str("cycle"),
            InstanceKind::Grid => f.write_str("grid"),
            InstanceKind::RandomPlanarMesh => f.write_str("random_planar_mesh"),
            InstanceKind::GridPlusApices(k) => write!(f, "grid_plus_apices:{k}"),
            InstanceKind::ProfileGadget(k) => write!(f, "profile_gadget:{k}"),
            InstanceKind::CliquesumChain => f.write_str("cliquesum_chain"),
            InstanceKind::StarGlue => f.write_str("star_glue"),
        }
    }
}

/// A generated graph with whatever structure its kind comes with.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Graph,
    pub apices: Vec<usize>,
    pub td: Option<TreeDecomposition>,
    /// Core and satellite vertex sets for star-shaped kinds.
    pub parts: Option<Vec<Vec<usize>>>,
}

impl Instance {
    fn plain(graph: Graph) -> Self {
        Instance { graph, apices: Vec::new(), td: None, parts: None }
    }
}

/// Builds an instance. `size` is the vertex count for paths and cycles, the
/// side length for grid kinds, `ℓ` for the gadget, the number of pieces for
/// a chain, and the core side length for a star.
pub fn gen_instance(kind: InstanceKind, seed: u64, size: usize) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        InstanceKind::Path => {
            let edges: Vec<(usize, usize)> = (1..size).map(|i| (i - 1, i)).collect();
            Ok(Instance::plain(Graph::unweighted(size, &edges)?))
        }
        InstanceKind::Cycle => {
            if size < 3 {
                return Err(Error::Precondition("a cycle needs at least 3 vertices".into()));
            }
            let edges: Vec<(usize, usize)> = (0..size).map(|i| (i, (i + 1) % size)).collect();
            Ok(Instance::plain(Graph::unweighted(size, &edges)?))
        }
        InstanceKind::Grid => Ok(Instance::plain(Graph::unweighted(size * size, &grid_edges(size, size, 0))?)),
        InstanceKind::RandomPlanarMesh => Ok(Instance::plain(planar_mesh(&mut rng, size, seed % 2 == 1)?)),
        InstanceKind::GridPlusApices(k) => grid_plus_apices(&mut rng, size, k),
        InstanceKind::ProfileGadget(k) => Ok(Instance::plain(gen_profile_gadget(k, size as u64)?.graph)),
        InstanceKind::CliquesumChain => cliquesum_chain(&mut rng, size),
        InstanceKind::StarGlue => star_glue(&mut rng, size, seed % 2 == 0),
    }
}

fn grid_edges(rows: usize, cols: usize, offset: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let v = offset + i * cols + j;
            if j + 1 < cols {
                edges.push((v, v + 1));
            }
            if i + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    edges
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Grid with one random diagonal per cell, thinned by deleting non-tree
/// edges of a random spanning tree.
fn planar_mesh(rng: &mut ChaCha8Rng, side: usize, weighted: bool) -> Result<Graph> {
    let n = side * side;
    let mut edges = grid_edges(side, side, 0);
    for i in 0..side.saturating_sub(1) {
        for j in 0..side - 1 {
            let v = i * side + j;
            if rng.gen_bool(0.5) {
                edges.push((v, v + side + 1));
            } else {
                edges.push((v + 1, v + side));
            }
        }
    }
    edges.shuffle(rng);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut kept = Vec::with_capacity(edges.len());
    for (u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            kept.push((u, v));
        } else if rng.gen_bool(0.6) {
            kept.push((u, v));
        }
    }
    let weighted_edges: Vec<(usize, usize, Dist)> = kept
        .into_iter()
        .map(|(u, v)| (u, v, if weighted { rng.gen_range(1..=4) } else { 1 }))
        .collect();
    Graph::from_edges(n, weighted_edges)
}

fn grid_plus_apices(rng: &mut ChaCha8Rng, side: usize, k: usize) -> Result<Instance> {
    let base = side * side;
    let mut edges = grid_edges(side, side, 0);
    let apices: Vec<usize> = (base..base + k).collect();
    let reach = (base / 10).max(2).min(base.max(1));
    for &a in &apices {
        let picks = rand::seq::index::sample(rng, base, reach.min(base));
        edges.extend(picks.into_iter().map(|v| (a, v)));
    }
    for (i, &a) in apices.iter().enumerate() {
        for &b in &apices[i + 1..] {
            if rng.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    let graph = Graph::unweighted(base + k, &edges)?;
    Ok(Instance { graph, apices, td: None, parts: None })
}

/// Grid pieces glued along 2 or 3 vertices, each with a private apex.
fn cliquesum_chain(rng: &mut ChaCha8Rng, pieces: usize) -> Result<Instance> {
    if pieces == 0 {
        return Err(Error::Precondition("a chain needs at least one piece".into()));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut bags: Vec<Vec<usize>> = Vec::new();
    let mut apex_sets = Vec::new();
    let mut next = 0;
    let mut glue: Vec<usize> = Vec::new();
    for _ in 0..pieces {
        let w = 8 + rng.gen_range(0..4);
        // local grid vertex -> global id; the first glue.len() vertices of
        // the first row are shared with the previous piece
        let mut ids = Vec::with_capacity(w * w);
        for local in 0..w * w {
            if local < glue.len() {
                ids.push(glue[local]);
            } else {
                ids.push(next);
                next += 1;
            }
        }
        edges.extend(grid_edges(w, w, 0).into_iter().map(|(u, v)| (ids[u], ids[v])));
        let apex = next;
        next += 1;
        let reach = 3 + rng.gen_range(0..4);
        let picks = rand::seq::index::sample(rng, w * w, reach);
        edges.extend(picks.into_iter().map(|v| (apex, ids[v])));
        let mut bag = ids.clone();
        bag.push(apex);
        bag.sort_unstable();
        bags.push(bag);
        apex_sets.push(vec![apex]);
        let g = 2 + rng.gen_range(0..2);
        glue = ids[(w - 1) * w..(w - 1) * w + g].to_vec();
    }
    let graph = Graph::unweighted(next, &edges)?;
    let tree: Vec<(usize, usize)> = (1..pieces).map(|i| (i - 1, i)).collect();
    let td = TreeDecomposition::new(next, bags, apex_sets, tree)?;
    Ok(Instance { graph, apices: Vec::new(), td: Some(td), parts: None })
}

/// A core grid with small grid satellites attached by edges to runs of
/// consecutive core vertices, an apex on the core, and optionally a long
/// path glued at two core vertices.
fn star_glue(rng: &mut ChaCha8Rng, side: usize, long_path: bool) -> Result<Instance> {
    if side < 3 {
        return Err(Error::Precondition("the star core needs side at least 3".into()));
    }
    let core_n = side * side;
    let mut edges = grid_edges(side, side, 0);
    let apex = core_n;
    let mut next = core_n + 1;
    let picks = rand::seq::index::sample(rng, core_n, (core_n / 8).max(2));
    edges.extend(picks.into_iter().map(|v| (apex, v)));
    let core: Vec<usize> = (0..core_n).collect();
    let mut bags = vec![{
        let mut b = core.clone();
        b.push(apex);
        b
    }];
    let mut parts = vec![core];
    let satellites = 3 + rng.gen_range(0..3);
    for _ in 0..satellites {
        let s = 3 + rng.gen_range(0..3);
        let t = 2 + rng.gen_range(0..3);
        let start = rng.gen_range(0..=core_n - t);
        let offset = next;
        edges.extend(grid_edges(s, s, offset));
        for j in 0..t {
            edges.push((start + j, offset + j.min(s - 1)));
        }
        next += s * s;
        let mut bag: Vec<usize> = (start..start + t).chain(offset..next).collect();
        bag.sort_unstable();
        parts.push(bag.clone());
        bags.push(bag);
    }
    if long_path {
        let len = 4 * side;
        let x = rng.gen_range(0..core_n);
        let y = (x + 1 + rng.gen_range(0..core_n - 1)) % core_n;
        let offset = next;
        edges.extend((1..len).map(|i| (offset + i - 1, offset + i)));
        edges.push((x, offset));
        edges.push((offset + len - 1, y));
        next += len;
        let mut bag: Vec<usize> = (offset..next).collect();
        bag.push(x);
        bag.push(y);
        bag.sort_unstable();
        parts.push(bag.clone());
        bags.push(bag);
    }
    let graph = Graph::unweighted(next, &edges)?;
    let mut apex_sets = vec![Vec::new(); bags.len()];
    apex_sets[0].push(apex);
    let tree: Vec<(usize, usize)> = (1..bags.len()).map(|i| (0, i)).collect();
    let td = TreeDecomposition::new(next, bags, apex_sets, tree)?;
    Ok(Instance { graph, apices: vec![apex], td: Some(td), parts: Some(parts) })
}
