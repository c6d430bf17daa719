//! Eccentricities for clique-sums of bounded-genus pieces with apices,
//! driven by a tree decomposition.

mod adhesion;
mod star;
mod td;

use std::time::Instant;

use rayon::prelude::*;

pub use adhesion::{shortcut_edges, shortcut_through, single_adhesion_max_dist, SideMaxima};
pub use star::{reduce_adhesions, star_ecc, StarOutput, StarParams, StarStats};
pub use td::{merge_comparable, parse_td, validate_td, write_td, TdReport, TreeDecomposition};

use crate::error::{Error, Result};
use crate::graph::{is_connected, naive_ecc, Dist, Graph};

/// A subtree left after deleting the heavy tree edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subtree {
    /// Nodes in breadth-first order from `top`.
    pub nodes: Vec<usize>,
    /// The node closest to the root.
    pub top: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyLight {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    /// Child endpoint of every heavy edge.
    pub heavy: Vec<usize>,
    pub subtrees: Vec<Subtree>,
    pub subtree_of: Vec<usize>,
}

/// Marks the edge above a non-root node `t` heavy when the bags hanging
/// below `t` through light edges weigh at least `threshold`:
/// `acc(t) = |β(t)| + Σ acc(c)` over light children `c`.
pub fn heavy_light_split(td: &TreeDecomposition, root: usize, threshold: f64) -> HeavyLight {
    let adj = td.adjacency();
    let mut parent = vec![None; td.len()];
    let mut order = vec![root];
    let mut seen = vec![false; td.len()];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let t = order[head];
        head += 1;
        for &s in &adj[t] {
            if !seen[s] {
                seen[s] = true;
                parent[s] = Some(t);
                order.push(s);
            }
        }
    }
    let mut acc = vec![0usize; td.len()];
    let mut is_heavy = vec![false; td.len()];
    for &t in order.iter().rev() {
        acc[t] += td.bags[t].len();
        if let Some(p) = parent[t] {
            if acc[t] as f64 >= threshold {
                is_heavy[t] = true;
            } else {
                acc[p] += acc[t];
            }
        }
    }
    let mut subtree_of = vec![usize::MAX; td.len()];
    let mut subtrees: Vec<Subtree> = Vec::new();
    for &t in &order {
        let id = match parent[t] {
            Some(p) if !is_heavy[t] => subtree_of[p],
            _ => {
                subtrees.push(Subtree { nodes: Vec::new(), top: t });
                subtrees.len() - 1
            }
        };
        subtree_of[t] = id;
        subtrees[id].nodes.push(t);
    }
    let heavy = order.iter().copied().filter(|&t| is_heavy[t]).collect();
    HeavyLight { root, parent, heavy, subtrees, subtree_of }
}

/// Settings for [`ecc_cliquesum`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CliquesumParams {
    /// Bound on adhesion and apex-set sizes checked during validation.
    pub k: usize,
    pub delta: f64,
    pub big_delta: f64,
    /// Subtree edges become heavy at this accumulated bag weight; defaults
    /// to `n^δ`.
    pub heavy_threshold: Option<f64>,
    /// Subtrees whose bags cover fewer vertices run the plain all-pairs
    /// search; `None` uses `n^Δ`.
    pub naive_threshold: Option<usize>,
    pub star: StarParams,
}

impl Default for CliquesumParams {
    fn default() -> Self {
        CliquesumParams {
            k: 8,
            delta: 1.0 / 356.0,
            big_delta: 355.0 / 356.0,
            heavy_threshold: None,
            naive_threshold: Some(512),
            star: StarParams::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliquesumStats {
    pub bags: usize,
    pub merged_bags: usize,
    pub bag_weight: usize,
    pub heavy_edges: usize,
    pub subtrees: usize,
    pub naive_subtrees: usize,
    pub star_subtrees: usize,
    pub promoted: usize,
    pub regions: usize,
    pub boundary_sum: usize,
    pub build_ms: u64,
    pub query_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliquesumOutput {
    pub ecc: Vec<Dist>,
    pub stats: CliquesumStats,
}

impl CliquesumOutput {
    pub fn diameter(&self) -> Dist {
        self.ecc.iter().copied().max().unwrap_or(0)
    }
}

fn fold_max(ecc: &mut [Dist], v: usize, d: Dist) {
    if ecc[v] < d {
        ecc[v] = d;
    }
}

/// Eccentricities of every vertex of a connected `g` from a tree
/// decomposition into bounded-genus pieces with apices.
pub fn ecc_cliquesum(g: &Graph, td: &TreeDecomposition, params: &CliquesumParams) -> Result<CliquesumOutput> {
    let n = g.n();
    let report = validate_td(g, td, params.k);
    if !report.passed() {
        return Err(Error::Validation(report.failures.join("; ")));
    }
    if n == 0 {
        return Ok(CliquesumOutput { ecc: Vec::new(), stats: CliquesumStats::default() });
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let build_start = Instant::now();
    let td_merged = merge_comparable(td);
    let tree = heavy_light_split(
        &td_merged,
        td_merged.default_root(),
        params.heavy_threshold.unwrap_or_else(|| (n as f64).powf(params.delta)),
    );
    let mut children = vec![Vec::new(); td_merged.len()];
    for (t, p) in tree.parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(t);
        }
    }
    let mut stats = CliquesumStats {
        bags: td.len(),
        merged_bags: td_merged.len(),
        bag_weight: td_merged.bag_weight(),
        heavy_edges: tree.heavy.len(),
        subtrees: tree.subtrees.len(),
        ..CliquesumStats::default()
    };

    let mut ecc = vec![0; n];
    let mut shortcuts: Vec<Vec<(usize, usize, Dist)>> = vec![Vec::new(); tree.subtrees.len()];
    for &c in &tree.heavy {
        let p = tree.parent[c].expect("heavy edges have a parent");
        let mut below = vec![false; n];
        let mut stack = vec![c];
        let mut in_subtree = vec![false; td_merged.len()];
        while let Some(t) = stack.pop() {
            in_subtree[t] = true;
            for &v in &td_merged.bags[t] {
                below[v] = true;
            }
            stack.extend(&children[t]);
        }
        let mut above = vec![false; n];
        for t in (0..td_merged.len()).filter(|&t| !in_subtree[t]) {
            for &v in &td_merged.bags[t] {
                above[v] = true;
            }
        }
        let a: Vec<usize> = (0..n).filter(|&v| below[v] && !above[v]).collect();
        let b: Vec<usize> = (0..n).filter(|&v| below[v] && above[v]).collect();
        let cside: Vec<usize> = (0..n).filter(|&v| above[v] && !below[v]).collect();
        if a.is_empty() || cside.is_empty() {
            // nested sides; nothing to pair across
            continue;
        }
        let (maxima, rows) = adhesion::single_adhesion_with_rows(g, &a, &b, &cside)?;
        for (&v, &d) in a.iter().zip(&maxima.a_side) {
            fold_max(&mut ecc, v, d);
        }
        for (&v, &d) in cside.iter().zip(&maxima.c_side) {
            fold_max(&mut ecc, v, d);
        }
        for (&s, row) in b.iter().zip(&rows) {
            let far = row.iter().copied().max().unwrap_or(0);
            fold_max(&mut ecc, s, far);
            for (v, &d) in row.iter().enumerate() {
                fold_max(&mut ecc, v, d);
            }
        }
        let below_only: Vec<bool> = (0..n).map(|v| below[v] && !above[v]).collect();
        let above_only: Vec<bool> = (0..n).map(|v| above[v] && !below[v]).collect();
        shortcuts[tree.subtree_of[p]].extend(shortcut_edges(g, &b, &below_only));
        shortcuts[tree.subtree_of[c]].extend(shortcut_edges(g, &b, &above_only));
    }
    stats.build_ms = build_start.elapsed().as_millis() as u64;

    let naive_limit = params
        .naive_threshold
        .unwrap_or_else(|| (n as f64).powf(params.big_delta).ceil() as usize);
    let query_start = Instant::now();
    let results: Vec<Result<(Vec<usize>, Vec<Dist>, Option<StarStats>)>> = tree
        .subtrees
        .par_iter()
        .zip(&shortcuts)
        .map(|(sub, extra)| {
            let mut verts: Vec<usize> =
                sub.nodes.iter().flat_map(|&t| td_merged.bags[t].iter().copied()).collect();
            verts.sort_unstable();
            verts.dedup();
            let (induced, local) = g.induced(&verts);
            let mut edges: Vec<(usize, usize, Dist)> = induced.edges().collect();
            edges.extend(extra.iter().map(|&(u, v, w)| {
                (local[u].expect("adhesion in subtree"), local[v].expect("adhesion in subtree"), w)
            }));
            let piece = Graph::from_edges(verts.len(), edges)?;
            if verts.len() < naive_limit {
                let all: Vec<usize> = (0..verts.len()).collect();
                return Ok((verts, naive_ecc(&piece, &all)?, None));
            }
            let apex_local: Vec<usize> = td_merged.apices[sub.top]
                .iter()
                .filter_map(|&a| local[a])
                .collect();
            let is_apex = |v: usize| td_merged.apices[sub.top].binary_search(&v).is_ok();
            let strip = |nodes: &[usize]| -> Vec<usize> {
                let mut part: Vec<usize> = nodes
                    .iter()
                    .flat_map(|&t| td_merged.bags[t].iter().copied())
                    .filter(|&v| !is_apex(v))
                    .map(|v| local[v].expect("bag in subtree"))
                    .collect();
                part.sort_unstable();
                part.dedup();
                part
            };
            let mut parts = vec![strip(&[sub.top])];
            for &s in children[sub.top].iter().filter(|&&s| tree.subtree_of[s] == tree.subtree_of[sub.top]) {
                let mut branch = Vec::new();
                let mut stack = vec![s];
                while let Some(t) = stack.pop() {
                    branch.push(t);
                    stack.extend(children[t].iter().filter(|&&x| tree.subtree_of[x] == tree.subtree_of[sub.top]));
                }
                parts.push(strip(&branch));
            }
            let out = star_ecc(&piece, &apex_local, &parts, &params.star)?;
            Ok((verts, out.ecc, Some(out.stats)))
        })
        .collect();
    for result in results {
        let (verts, d0, star_stats) = result?;
        for (&v, &d) in verts.iter().zip(&d0) {
            fold_max(&mut ecc, v, d);
        }
        match star_stats {
            None => stats.naive_subtrees += 1,
            Some(s) => {
                stats.star_subtrees += 1;
                stats.promoted += s.promoted;
                stats.regions += s.engine.regions;
                stats.boundary_sum += s.engine.boundary_sum;
            }
        }
    }
    stats.query_ms = query_start.elapsed().as_millis() as u64;
    Ok(CliquesumOutput { ecc, stats })
}
