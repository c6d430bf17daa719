//! Eccentricities of a star-shaped piece: a core `V_0` with satellites
//! attached on small adhesions, plus a few apices.
//!
//! Large adhesions are thinned by promoting vertices to apices. Every
//! component of `G - A' - V_0` is a satellite part; heavy parts are handled
//! by direct searches and replaced by shortcut edges, the remaining graph is
//! subdivided to unit weights, light parts are contracted to single vertices,
//! and a division of that contracted core is expanded back and handed to the
//! division engine.

use rayon::prelude::*;

use crate::division::{build_r_division_in, default_r, RDivision};
use crate::engine::{ecc_from_division, EngineOptions, EngineStats, APEX_CAP};
use crate::error::{Error, Result};
use crate::graph::{components, is_connected, search, Dist, Graph};

/// Settings for [`star_ecc`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarParams {
    /// Base exponent; the heavy threshold and region size derive from it.
    pub delta: f64,
    /// Edge weight above which a satellite part is heavy; defaults to
    /// `n^{(1 + 97δ)/151}`.
    pub heavy_threshold: Option<f64>,
    /// Region size for the contracted core; defaults to
    /// `max(4, ⌈n^{(2 - 108δ)/151}⌉)`.
    pub r: Option<usize>,
    /// Subdivision may add at most this many vertices per input vertex.
    pub subdivision_factor: usize,
    pub options: EngineOptions,
}

impl Default for StarParams {
    fn default() -> Self {
        StarParams {
            delta: 1.0 / 356.0,
            heavy_threshold: None,
            r: None,
            subdivision_factor: 16,
            options: EngineOptions::default(),
        }
    }
}

impl StarParams {
    pub fn heavy_exponent(&self) -> f64 {
        (1.0 + 97.0 * self.delta) / 151.0
    }

    pub fn region_exponent(&self) -> f64 {
        (2.0 - 108.0 * self.delta) / 151.0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StarStats {
    /// Vertices promoted to apices while thinning adhesions.
    pub promoted: usize,
    pub heavy_parts: usize,
    pub light_parts: usize,
    pub subdivision_vertices: usize,
    pub engine: EngineStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarOutput {
    pub ecc: Vec<Dist>,
    pub stats: StarStats,
}

/// Thins adhesions to at most 4 vertices: while some adhesion keeps more
/// than 4 vertices outside `M`, its 5 smallest such vertices join `M`.
/// Returns the thinned adhesions and `M` (sorted).
pub fn reduce_adhesions(adhesions: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut removed: Vec<usize> = Vec::new();
    for adhesion in adhesions {
        loop {
            let mut rest: Vec<usize> = adhesion.iter().copied().filter(|v| !removed.contains(v)).collect();
            if rest.len() <= 4 {
                break;
            }
            rest.sort_unstable();
            removed.extend_from_slice(&rest[..5]);
        }
    }
    removed.sort_unstable();
    let thinned = adhesions
        .iter()
        .map(|adhesion| {
            let mut rest: Vec<usize> = adhesion.iter().copied().filter(|v| removed.binary_search(v).is_err()).collect();
            rest.sort_unstable();
            rest.dedup();
            rest
        })
        .collect();
    (thinned, removed)
}

struct Part {
    interior: Vec<usize>,
    attach: Vec<usize>,
    heavy: bool,
}

/// Eccentricities of every vertex of `g`, where `parts[0]` is the core `V_0`
/// and `parts[1..]` are the satellites `V_i`; together with `apices` they
/// must cover the graph.
pub fn star_ecc(g: &Graph, apices: &[usize], parts: &[Vec<usize>], params: &StarParams) -> Result<StarOutput> {
    let n = g.n();
    if n == 0 {
        return Ok(StarOutput { ecc: Vec::new(), stats: StarStats::default() });
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let mut is_apex = vec![false; n];
    for &a in apices {
        g.check_vertex(a)?;
        is_apex[a] = true;
    }
    let Some(core) = parts.first() else {
        return Err(Error::Precondition("the core part V_0 is missing".into()));
    };
    let mut in_core = vec![false; n];
    for &v in core {
        g.check_vertex(v)?;
        in_core[v] = !is_apex[v];
    }
    let mut covered = is_apex.clone();
    for part in parts {
        for &v in part {
            g.check_vertex(v)?;
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(Error::Precondition(format!("vertex {} is in no part", v + 1)));
    }

    let adhesions: Vec<Vec<usize>> =
        parts[1..].iter().map(|p| p.iter().copied().filter(|&v| in_core[v]).collect()).collect();
    let (_, promoted) = reduce_adhesions(&adhesions);
    let mut big_a = apices.to_vec();
    big_a.extend(&promoted);
    if big_a.len() > APEX_CAP {
        return Err(Error::ApexCap { count: big_a.len(), cap: APEX_CAP });
    }
    for &v in &promoted {
        is_apex[v] = true;
        in_core[v] = false;
    }

    let outside: Vec<bool> = (0..n).map(|v| !is_apex[v] && !in_core[v]).collect();
    let threshold = params.heavy_threshold.unwrap_or_else(|| (n as f64).powf(params.heavy_exponent()));
    let mut part_of = vec![usize::MAX; n];
    let mut sat: Vec<Part> = Vec::new();
    for interior in components(g, &outside) {
        let id = sat.len();
        for &v in &interior {
            part_of[v] = id;
        }
        let mut attach: Vec<usize> = interior
            .iter()
            .flat_map(|&v| g.neighbors(v))
            .filter(|&x| in_core[x])
            .collect();
        attach.sort_unstable();
        attach.dedup();
        let weight: Dist = interior
            .iter()
            .flat_map(|&v| g.adjacent(v).map(move |(x, w)| (v, x, w)))
            .filter(|&(v, x, _)| (part_of[x] == id && v < x) || in_core[x])
            .map(|(_, _, w)| w)
            .sum();
        sat.push(Part { interior, attach, heavy: weight as f64 > threshold });
    }

    let heavy_vertices: Vec<usize> = sat.iter().filter(|p| p.heavy).flat_map(|p| p.interior.iter().copied()).collect();
    let (contrib, heavy_ecc) = heavy_rows(g, &heavy_vertices);

    // graph on the vertices that survive, with heavy parts replaced by shortcuts
    let kept: Vec<usize> = (0..n).filter(|&v| part_of[v] == usize::MAX || !sat[part_of[v]].heavy).collect();
    let mut local = vec![usize::MAX; n];
    for (i, &v) in kept.iter().enumerate() {
        local[v] = i;
    }
    let mut tilde: Vec<(usize, usize, Dist)> =
        g.edges().filter(|&(u, v, _)| local[u] != usize::MAX && local[v] != usize::MAX).collect();
    let shortcut_sets: Vec<Vec<(usize, usize, Dist)>> = sat
        .par_iter()
        .enumerate()
        .filter(|(_, p)| p.heavy)
        .map(|(id, p)| {
            let mut ends: Vec<usize> = big_a.iter().chain(&p.attach).copied().collect();
            ends.sort_unstable();
            ends.dedup();
            let mut out = Vec::new();
            for (i, &u) in ends.iter().enumerate() {
                let dist = search(g, &[u], |_| true, |x| part_of[x] == id);
                for &v in &ends[i + 1..] {
                    if dist[v] != Dist::MAX {
                        out.push((u, v, dist[v]));
                    }
                }
            }
            out
        })
        .collect();
    tilde.extend(shortcut_sets.into_iter().flatten());

    // unit-weight subdivision away from the apices
    let tn = kept.len();
    let extra: usize = tilde
        .iter()
        .filter(|&&(u, v, w)| w >= 2 && !is_apex[u] && !is_apex[v])
        .map(|&(_, _, w)| (w - 1) as usize)
        .sum();
    if extra > params.subdivision_factor.saturating_mul(n) {
        return Err(Error::SizeGuard(format!(
            "subdividing would add {extra} vertices to a {n}-vertex piece"
        )));
    }
    let total = tn + extra;
    // owner: light part id for interior vertices of a light part, else MAX
    let mut owner = vec![usize::MAX; total];
    for (i, &v) in kept.iter().enumerate() {
        owner[i] = part_of[v];
    }
    let mut edges: Vec<(usize, usize, Dist)> = Vec::with_capacity(tilde.len() + extra);
    let mut next = tn;
    for &(u, v, w) in &tilde {
        let (lu, lv) = (local[u], local[v]);
        if w == 1 || is_apex[u] || is_apex[v] {
            edges.push((lu, lv, w));
            continue;
        }
        let side = if part_of[u] != usize::MAX { part_of[u] } else { part_of[v] };
        let mut prev = lu;
        for _ in 1..w {
            owner[next] = side;
            edges.push((prev, next, 1));
            prev = next;
            next += 1;
        }
        edges.push((prev, lv, 1));
    }
    let expanded = Graph::from_edges(total, edges)?;

    // contracted core: light parts collapse to one node each
    let mut node = vec![usize::MAX; total];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut star_node = vec![usize::MAX; sat.len()];
    for x in 0..total {
        if x < tn && is_apex[kept[x]] {
            continue;
        }
        let o = owner[x];
        if o == usize::MAX {
            node[x] = members.len();
            members.push(vec![x]);
        } else {
            if star_node[o] == usize::MAX {
                star_node[o] = members.len();
                members.push(Vec::new());
            }
            node[x] = star_node[o];
            members[star_node[o]].push(x);
        }
    }
    for (id, p) in sat.iter().enumerate() {
        if star_node[id] != usize::MAX {
            members[star_node[id]].extend(p.attach.iter().map(|&v| local[v]));
        }
    }
    let contracted_edges: Vec<(usize, usize)> = expanded
        .edges()
        .filter(|&(u, v, _)| node[u] != usize::MAX && node[v] != usize::MAX && node[u] != node[v])
        .map(|(u, v, _)| (node[u], node[v]))
        .collect();
    let contracted = Graph::unweighted(members.len(), &contracted_edges)?;
    let r = params.r.unwrap_or_else(|| default_r(n, params.region_exponent()));
    let core_div = build_r_division_in(&contracted, vec![true; members.len()], r)?;
    let regions: Vec<Vec<usize>> = core_div
        .regions
        .iter()
        .map(|region| region.iter().flat_map(|&z| members[z].iter().copied()).collect())
        .collect();
    let domain: Vec<bool> = (0..total).map(|x| node[x] != usize::MAX).collect();
    let div = RDivision::from_regions(&expanded, domain, regions)?;

    let local_apices: Vec<usize> = big_a.iter().map(|&a| local[a]).collect();
    let targets: Vec<usize> = (0..tn).collect();
    let out = ecc_from_division(&expanded, &local_apices, &targets, &div, &params.options)?;

    let mut ecc = vec![0; n];
    for (i, &v) in kept.iter().enumerate() {
        ecc[v] = out.ecc[i].max(contrib[v]);
    }
    for (v, e) in heavy_ecc {
        ecc[v] = e;
    }
    let stats = StarStats {
        promoted: promoted.len(),
        heavy_parts: sat.iter().filter(|p| p.heavy).count(),
        light_parts: sat.iter().filter(|p| !p.heavy).count(),
        subdivision_vertices: extra,
        engine: out.stats,
    };
    Ok(StarOutput { ecc, stats })
}

/// Full searches from `sources`: the largest distance to each vertex over
/// all sources, and the eccentricity of every source.
fn heavy_rows(g: &Graph, sources: &[usize]) -> (Vec<Dist>, Vec<(usize, Dist)>) {
    let n = g.n();
    sources
        .par_iter()
        .fold(
            || (vec![0; n], Vec::new()),
            |(mut contrib, mut eccs), &s| {
                let row = search(g, &[s], |_| true, |_| true);
                let mut far = 0;
                for (c, &d) in contrib.iter_mut().zip(&row) {
                    *c = (*c).max(d);
                    far = far.max(d);
                }
                eccs.push((s, far));
                (contrib, eccs)
            },
        )
        .reduce(
            || (vec![0; n], Vec::new()),
            |(mut a, mut ea), (b, eb)| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = (*x).max(y);
                }
                ea.extend(eb);
                (a, ea)
            },
        )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::naive_ecc;

    #[test]
    fn thinning() {
        assert_eq!(reduce_adhesions(&[vec![1, 2, 3], vec![4, 5, 6, 7]]).1, Vec::<usize>::new());
        let (thin, m) = reduce_adhesions(&[(0..7).collect()]);
        assert_eq!(m, vec![0, 1, 2, 3, 4]);
        assert_eq!(thin, vec![vec![5, 6]]);
        let (thin, m) = reduce_adhesions(&[(0..9).collect()]);
        assert_eq!(m.len(), 5);
        assert_eq!(thin[0].len(), 4);
    }

    fn core_with_tails() -> (Graph, Vec<Vec<usize>>) {
        // 4x4 grid core (0..16); satellite A: path 16-17-18 glued at 0 and 3;
        // satellite B: triangle 19, 20 glued at 15
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                let v = i * 4 + j;
                if j < 3 {
                    edges.push((v, v + 1, 1));
                }
                if i < 3 {
                    edges.push((v, v + 4, 1));
                }
            }
        }
        edges.extend([(0, 16, 1), (16, 17, 2), (17, 18, 1), (18, 3, 1), (15, 19, 1), (19, 20, 3), (20, 15, 1)]);
        let g = Graph::from_edges(21, edges).unwrap();
        let parts = vec![(0..16).collect(), vec![0, 3, 16, 17, 18], vec![15, 19, 20]];
        (g, parts)
    }

    #[test]
    fn light_and_heavy_parts_match_naive() {
        let (g, parts) = core_with_tails();
        let all: Vec<usize> = (0..g.n()).collect();
        let expected = naive_ecc(&g, &all).unwrap();
        for threshold in [0.5, 4.5, 100.0] {
            let params = StarParams { heavy_threshold: Some(threshold), r: Some(4), ..StarParams::default() };
            let out = star_ecc(&g, &[], &parts, &params).unwrap();
            assert_eq!(out.ecc, expected, "threshold {threshold}");
        }
    }

    #[test]
    fn core_only_with_apex() {
        let mut edges: Vec<(usize, usize)> = (1..12).map(|i| (i - 1, i)).collect();
        edges.extend([(12, 0), (12, 6), (12, 11)]);
        let g = Graph::unweighted(13, &edges).unwrap();
        let out = star_ecc(&g, &[12], &[(0..12).collect()], &StarParams { r: Some(3), ..Default::default() }).unwrap();
        assert_eq!(out.ecc, naive_ecc(&g, &(0..13).collect::<Vec<_>>()).unwrap());
    }
}
