//! Eccentricities from a division of `G - A`.
//!
//! For a vertex `u` with home region `R`, targets inside `R` are resolved
//! explicitly as the minimum of three routes: through an apex, through the
//! boundary `∂R` in `G - A`, and inside `G[R]`. Targets outside `R` are
//! grouped by their distance profile over `∂R`; within one group the distance
//! to `u` is `min(r_1 + d(a_1, v), ..., r_k + d(a_k, v), r_{k+1} + d(s_R, v))`
//! for shifts depending only on `u` and the group, so the farthest member is a
//! single max-min query. Targets that `∂R` cannot reach in `G - A` are only
//! reachable through an apex and form one extra group.

use std::time::Instant;

use rayon::prelude::*;

use crate::division::{build_r_division_in, default_r, RDivision};
use crate::error::{Error, Result};
use crate::graph::{apsp_rows, is_connected, search, Dist, Graph, UNREACHABLE};
use crate::profiles::ProfileRefiner;
use crate::range::{MaxMinIndex, DEFAULT_DIM_CAP};

/// Largest apex set the engine accepts.
pub const APEX_CAP: usize = DEFAULT_DIM_CAP;

/// Exponent for the default region size `max(4, ⌈n^ρ⌉)`.
pub const DEFAULT_RHO: f64 = 2.0 / 25.0;

/// Apex vertices and their distance rows in the full graph.
#[derive(Clone, Debug)]
pub struct ApexContext {
    pub apices: Vec<usize>,
    pub rows: Vec<Vec<Dist>>,
}

impl ApexContext {
    pub fn new(g: &Graph, apices: &[usize]) -> Result<Self> {
        Self::with_cap(g, apices, APEX_CAP)
    }

    pub fn with_cap(g: &Graph, apices: &[usize], cap: usize) -> Result<Self> {
        if apices.len() > cap {
            return Err(Error::ApexCap { count: apices.len(), cap });
        }
        let mut sorted = apices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != apices.len() {
            return Err(Error::Precondition("apex list contains duplicates".into()));
        }
        for &a in apices {
            g.check_vertex(a)?;
        }
        let rows = apices.par_iter().map(|&a| search(g, &[a], |_| true, |_| true)).collect();
        Ok(ApexContext { apices: apices.to_vec(), rows })
    }

    pub fn len(&self) -> usize {
        self.apices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.apices.is_empty()
    }

    /// Shortest `u`-`v` route through some apex.
    pub fn via_apex(&self, u: usize, v: usize) -> Option<Dist> {
        self.rows.iter().filter_map(|row| row[u].checked_add(row[v])).min()
    }
}

/// All-pairs distances inside `G[region]`, indexed by position in `region`.
pub fn region_apsp(g: &Graph, region: &[usize]) -> Vec<Vec<Dist>> {
    let (sub, _) = g.induced(region);
    apsp_rows(&sub)
}

/// How targets outside the home region are resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExternalPhase {
    /// One max-min query per profile group.
    #[default]
    Indexed,
    /// Explicit loop over the members of each group.
    Scan,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineOptions {
    pub external: ExternalPhase,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub regions: usize,
    pub boundary_sum: usize,
    /// Number of profile groups, for every region that is home to a vertex.
    pub profile_counts: Vec<usize>,
    pub build_ms: u64,
    pub query_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EccOutput {
    pub ecc: Vec<Dist>,
    pub stats: EngineStats,
}

impl EccOutput {
    /// Largest eccentricity, or 0 for an empty graph.
    pub fn diameter(&self) -> Dist {
        self.ecc.iter().copied().max().unwrap_or(0)
    }
}

/// The three candidate routes between two vertices of one region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseDistances {
    pub target: usize,
    pub via_apex: Option<Dist>,
    pub via_boundary: Option<Dist>,
    pub inside: Option<Dist>,
}

impl CaseDistances {
    pub fn best(&self) -> Option<Dist> {
        [self.via_apex, self.via_boundary, self.inside].into_iter().flatten().min()
    }
}

enum Batch {
    Indexed(MaxMinIndex),
    Scan(Vec<i64>),
}

impl Batch {
    fn new(dim: usize, points: Vec<i64>, phase: ExternalPhase) -> Result<Self> {
        Ok(match phase {
            ExternalPhase::Indexed => Batch::Indexed(MaxMinIndex::build_flat_with_cap(dim, &points, APEX_CAP)?),
            ExternalPhase::Scan => Batch::Scan(points),
        })
    }

    fn query(&self, r: &[i64]) -> Result<Option<i64>> {
        match self {
            Batch::Indexed(index) => index.query(r),
            Batch::Scan(points) => Ok(points
                .chunks_exact(r.len())
                .map(|p| p.iter().zip(r).map(|(x, s)| x + s).min().expect("dimension is positive"))
                .max()),
        }
    }
}

struct Group {
    profile: Vec<i64>,
    batch: Batch,
}

/// Precomputed data of one region.
pub struct RegionWorkspace<'a> {
    ctx: &'a ApexContext,
    region: &'a [usize],
    /// `local_rows[i][j]`: distance in `G - A` from `∂R[i]` to `region[j]`.
    local_rows: Vec<Vec<Dist>>,
    inner: Vec<Vec<Dist>>,
    groups: Vec<Group>,
    /// Targets outside `R` that `∂R` cannot reach in `G - A`.
    stranded: Option<Batch>,
    targets_inside: Vec<usize>,
    profile_count: usize,
}

impl<'a> RegionWorkspace<'a> {
    /// Builds the workspace of region `index` for the target mask `targets`.
    pub fn build(
        g: &Graph,
        ctx: &'a ApexContext,
        div: &'a RDivision,
        index: usize,
        targets: &[bool],
        opts: &EngineOptions,
    ) -> Result<Self> {
        let region = div.regions[index].as_slice();
        let boundary = &div.boundary[index];
        let domain = &div.domain;
        let in_region = |v: usize| region.binary_search(&v).is_ok();
        let external: Vec<usize> = (0..g.n()).filter(|&v| targets[v] && domain[v] && !in_region(v)).collect();

        let pivot_row = search(g, &[div.pivot[index]], |v| domain[v], |_| true);
        let mut refiner = ProfileRefiner::new(&external, &pivot_row);
        let mut local_rows = Vec::with_capacity(boundary.len());
        for &s in boundary {
            let row = if s == div.pivot[index] { pivot_row.clone() } else { search(g, &[s], |v| domain[v], |_| true) };
            refiner.push_row(&row);
            local_rows.push(region.iter().map(|&v| row[v]).collect());
        }
        let table = refiner.finish();
        let inner = region_apsp(g, region);

        let k = ctx.len();
        let mut groups = Vec::with_capacity(table.classes.len());
        for class in table.classes {
            let mut points = Vec::with_capacity(class.members.len() * (k + 1));
            for &v in &class.members {
                for row in &ctx.rows {
                    points.push(to_coord(row[v])?);
                }
                points.push(to_coord(pivot_row[v])?);
            }
            groups.push(Group { profile: class.profile, batch: Batch::new(k + 1, points, opts.external)? });
        }
        let stranded = if table.unreachable.is_empty() {
            None
        } else if k == 0 {
            return Err(Error::Disconnected);
        } else {
            let mut points = Vec::with_capacity(table.unreachable.len() * k);
            for &v in &table.unreachable {
                for row in &ctx.rows {
                    points.push(to_coord(row[v])?);
                }
            }
            Some(Batch::new(k, points, opts.external)?)
        };
        let targets_inside = (0..region.len()).filter(|&j| targets[region[j]]).collect();
        let profile_count = groups.len();
        Ok(RegionWorkspace { ctx, region, local_rows, inner, groups, stranded, targets_inside, profile_count })
    }

    pub fn profile_count(&self) -> usize {
        self.profile_count
    }

    fn local(&self, v: usize) -> Option<usize> {
        self.region.binary_search(&v).ok()
    }

    fn cases_local(&self, i: usize, j: usize) -> CaseDistances {
        let (u, v) = (self.region[i], self.region[j]);
        let via_boundary = self
            .local_rows
            .iter()
            .filter(|row| row[i] != UNREACHABLE && row[j] != UNREACHABLE)
            .map(|row| row[i] + row[j])
            .min();
        let inside = Some(self.inner[i][j]).filter(|&d| d != UNREACHABLE);
        CaseDistances { target: v, via_apex: self.ctx.via_apex(u, v), via_boundary, inside }
    }

    /// Route candidates from `u` to every vertex of the region, in region
    /// order. `None` if `u` is not in the region.
    pub fn case_distances(&self, u: usize) -> Option<Vec<CaseDistances>> {
        let i = self.local(u)?;
        Some((0..self.region.len()).map(|j| self.cases_local(i, j)).collect())
    }

    /// `ecc_X(u)` for a vertex `u` of this region.
    pub fn ecc(&self, u: usize, targets: &[bool]) -> Result<Dist> {
        let i = self.local(u).ok_or_else(|| Error::Precondition(format!("vertex {} is not in the region", u + 1)))?;
        let mut best: Dist = 0;
        for (a, row) in self.ctx.apices.iter().zip(&self.ctx.rows) {
            if targets[*a] {
                best = best.max(row[u]);
            }
        }
        for &j in &self.targets_inside {
            let d = self.cases_local(i, j).best().ok_or(Error::Disconnected)?;
            best = best.max(d);
        }

        let k = self.ctx.len();
        let mut r: Vec<i64> = Vec::with_capacity(k + 1);
        for row in &self.ctx.rows {
            r.push(to_coord(row[u])?);
        }
        if let Some(stranded) = &self.stranded {
            if let Some(d) = stranded.query(&r)? {
                best = best.max(d as Dist);
            }
        }
        r.push(0);
        for group in &self.groups {
            let shift = self
                .local_rows
                .iter()
                .zip(&group.profile)
                .map(|(row, &p)| (row[i] as i64).saturating_add(p))
                .min()
                .unwrap_or(0);
            r[k] = shift;
            if let Some(d) = group.batch.query(&r)? {
                best = best.max(d as Dist);
            }
        }
        Ok(best)
    }
}

fn to_coord(d: Dist) -> Result<i64> {
    if d == UNREACHABLE {
        return Err(Error::Disconnected);
    }
    i64::try_from(d).map_err(|_| Error::NonFiniteCoordinate(i64::MAX))
}

/// `X`-eccentricities of all vertices of `g`, given a division of `G - A`.
///
/// `targets` is `X`. Every vertex outside `apices` must have a home region
/// in `div`, and the division's domain must be exactly `V ∖ A`.
pub fn ecc_from_division(
    g: &Graph,
    apices: &[usize],
    targets: &[usize],
    div: &RDivision,
    opts: &EngineOptions,
) -> Result<EccOutput> {
    let n = g.n();
    if targets.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut x = vec![false; n];
    for &v in targets {
        g.check_vertex(v)?;
        x[v] = true;
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let build_start = Instant::now();
    let ctx = ApexContext::new(g, apices)?;
    check_division(g, &ctx, div)?;

    let mut ecc = vec![0; n];
    for (a, row) in ctx.apices.iter().zip(&ctx.rows) {
        ecc[*a] = (0..n).filter(|&v| x[v]).map(|v| row[v]).max().unwrap_or(0);
    }
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); div.len()];
    for v in 0..n {
        if let Some(h) = div.home_region[v] {
            owners[h].push(v);
        }
    }
    let setup_ms = build_start.elapsed().as_millis() as u64;

    let busy: Vec<usize> = (0..div.len()).filter(|&h| !owners[h].is_empty()).collect();
    let results: Vec<Result<(Vec<Dist>, usize, u64, u64)>> = busy
        .par_iter()
        .map(|&h| {
            let start = Instant::now();
            let ws = RegionWorkspace::build(g, &ctx, div, h, &x, opts)?;
            let built = start.elapsed();
            let answers = owners[h].iter().map(|&u| ws.ecc(u, &x)).collect::<Result<Vec<_>>>()?;
            let queried = start.elapsed() - built;
            Ok((answers, ws.profile_count(), built.as_millis() as u64, queried.as_millis() as u64))
        })
        .collect();

    let mut stats = EngineStats {
        regions: div.len(),
        boundary_sum: div.boundary_sum(),
        build_ms: setup_ms,
        ..EngineStats::default()
    };
    for (&h, result) in busy.iter().zip(results) {
        let (answers, profiles, build_ms, query_ms) = result?;
        for (&u, d) in owners[h].iter().zip(answers) {
            ecc[u] = d;
        }
        stats.profile_counts.push(profiles);
        stats.build_ms += build_ms;
        stats.query_ms += query_ms;
    }
    Ok(EccOutput { ecc, stats })
}

fn check_division(g: &Graph, ctx: &ApexContext, div: &RDivision) -> Result<()> {
    let n = g.n();
    if div.domain.len() != n || div.home_region.len() != n || div.boundary.len() != div.len() {
        return Err(Error::Validation("division does not match the graph".into()));
    }
    let mut apex = vec![false; n];
    for &a in &ctx.apices {
        apex[a] = true;
    }
    for v in 0..n {
        if div.domain[v] == apex[v] {
            return Err(Error::Validation("division domain must be exactly the non-apex vertices".into()));
        }
        match div.home_region[v] {
            Some(h) if div.regions.get(h).is_some_and(|r| r.binary_search(&v).is_ok()) => {}
            None if apex[v] => {}
            _ => return Err(Error::Validation(format!("vertex {} has no valid home region", v + 1))),
        }
    }
    for region in &div.regions {
        if region.iter().any(|&v| v >= n || apex[v]) || !region.is_sorted() {
            return Err(Error::Validation("regions must be sorted subsets of the non-apex vertices".into()));
        }
    }
    Ok(())
}

/// Route candidates from `u` to every vertex of its home region.
pub fn case_distances(g: &Graph, apices: &[usize], div: &RDivision, u: usize) -> Result<Vec<CaseDistances>> {
    g.check_vertex(u)?;
    let ctx = ApexContext::new(g, apices)?;
    check_division(g, &ctx, div)?;
    let h = div.home_region[u].ok_or_else(|| Error::Precondition("apex vertices have no home region".into()))?;
    let none = vec![false; g.n()];
    let ws = RegionWorkspace::build(g, &ctx, div, h, &none, &EngineOptions::default())?;
    Ok(ws.case_distances(u).expect("home region contains the vertex"))
}

/// Settings for [`ecc_genus_apex`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenusParams {
    pub rho: f64,
    /// Region size; overrides `rho` when set.
    pub r: Option<usize>,
    pub options: EngineOptions,
}

impl Default for GenusParams {
    fn default() -> Self {
        GenusParams { rho: DEFAULT_RHO, r: None, options: EngineOptions::default() }
    }
}

/// Eccentricities with respect to `targets` (all vertices if `None`): divides
/// `G - A` into regions of size `max(4, ⌈n^ρ⌉)` and runs
/// [`ecc_from_division`].
pub fn ecc_genus_apex(
    g: &Graph,
    apices: &[usize],
    targets: Option<&[usize]>,
    params: &GenusParams,
) -> Result<EccOutput> {
    let n = g.n();
    if apices.len() > APEX_CAP {
        return Err(Error::ApexCap { count: apices.len(), cap: APEX_CAP });
    }
    let mut domain = vec![true; n];
    for &a in apices {
        g.check_vertex(a)?;
        domain[a] = false;
    }
    if !domain.iter().any(|&b| b) {
        return Err(Error::Precondition("the apex set must leave at least one vertex".into()));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let r = params.r.unwrap_or_else(|| default_r(n, params.rho));
    let div = build_r_division_in(g, domain, r)?;
    let all: Vec<usize>;
    let targets = match targets {
        Some(t) => t,
        None => {
            all = (0..n).collect();
            &all
        }
    };
    ecc_from_division(g, apices, targets, &div, &params.options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::{build_r_division, load_division};
    use crate::graph::naive_ecc;

    fn grid(w: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..w {
            for j in 0..w {
                let v = i * w + j;
                if j + 1 < w {
                    edges.push((v, v + 1));
                }
                if i + 1 < w {
                    edges.push((v, v + w));
                }
            }
        }
        Graph::unweighted(w * w, &edges).unwrap()
    }

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn star_with_center_apex() {
        let g = Graph::unweighted(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let out = ecc_genus_apex(&g, &[0], None, &GenusParams::default()).unwrap();
        assert_eq!(out.ecc, vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn grid_without_apices() {
        let g = grid(10);
        let div = build_r_division(&g, 16).unwrap();
        let out = ecc_from_division(&g, &[], &all(100), &div, &EngineOptions::default()).unwrap();
        assert_eq!(out.ecc, naive_ecc(&g, &all(100)).unwrap());
        assert_eq!(out.stats.regions, div.len());
    }

    #[test]
    fn path_closed_form() {
        let n = 100;
        let g = Graph::unweighted(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap();
        let out = ecc_genus_apex(&g, &[], None, &GenusParams::default()).unwrap();
        let expected: Vec<Dist> = (0..n).map(|i| i.max(n - 1 - i) as Dist).collect();
        assert_eq!(out.ecc, expected);
        assert_eq!(out.diameter(), 99);
    }

    #[test]
    fn induced_region_distances() {
        // cycle of 6; region 0-1-2-3 is an induced path
        let g = Graph::unweighted(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let d = region_apsp(&g, &[0, 1, 2, 3]);
        assert_eq!(d[0][3], 3);
        let tri = Graph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(region_apsp(&tri, &[0, 1, 2]).iter().flatten().all(|&d| d <= 1));
    }

    #[test]
    fn cases_cover_every_pair() {
        let g = grid(6);
        let div = build_r_division(&g, 5).unwrap();
        let n = g.n();
        for u in 0..n {
            let truth = crate::graph::sssp(&g, u).unwrap().dist;
            for c in case_distances(&g, &[], &div, u).unwrap() {
                assert_eq!(c.best(), Some(truth[c.target]));
            }
        }
    }

    #[test]
    fn scan_matches_index_with_apices() {
        let mut edges = Vec::new();
        let w = 7;
        let base = grid(w);
        edges.extend(base.edges());
        let n = w * w + 2;
        for v in [0usize, 13, 30, 48] {
            edges.push((w * w, v, 1));
        }
        for v in [6usize, 24, 42] {
            edges.push((w * w + 1, v, 2));
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let apices = [w * w, w * w + 1];
        let params = GenusParams { r: Some(6), ..GenusParams::default() };
        let fast = ecc_genus_apex(&g, &apices, None, &params).unwrap();
        let scan_params = GenusParams { options: EngineOptions { external: ExternalPhase::Scan }, ..params };
        let scan = ecc_genus_apex(&g, &apices, None, &scan_params).unwrap();
        assert_eq!(fast.ecc, scan.ecc);
        assert_eq!(fast.ecc, naive_ecc(&g, &all(n)).unwrap());
    }

    #[test]
    fn apex_separating_the_rest() {
        // two triangles joined only through vertex 6
        let g = Graph::unweighted(7, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (6, 0), (6, 3)]).unwrap();
        let params = GenusParams { r: Some(2), ..GenusParams::default() };
        let out = ecc_genus_apex(&g, &[6], None, &params).unwrap();
        assert_eq!(out.ecc, naive_ecc(&g, &all(7)).unwrap());
    }

    #[test]
    fn target_subset() {
        let g = grid(5);
        let targets = [0usize, 24];
        let out = ecc_genus_apex(&g, &[], Some(&targets), &GenusParams { r: Some(4), ..Default::default() }).unwrap();
        assert_eq!(out.ecc, naive_ecc(&g, &targets).unwrap());
    }

    #[test]
    fn preconditions() {
        let k3 = Graph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(ecc_genus_apex(&k3, &[0, 1, 2], None, &GenusParams::default()), Err(Error::Precondition(_))));
        let split = Graph::unweighted(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(ecc_genus_apex(&split, &[], None, &GenusParams::default()), Err(Error::Disconnected)));
        let many: Vec<usize> = (0..9).collect();
        let big = grid(4);
        assert!(matches!(ecc_genus_apex(&big, &many, None, &GenusParams::default()), Err(Error::ApexCap { .. })));
        let div = load_division("1 2\n", &k3, &[]).unwrap();
        assert!(matches!(
            ecc_from_division(&k3, &[], &[0], &div, &EngineOptions::default()),
            Err(Error::Validation(_))
        ));
    }
}
