//! Distance profiles, profile grouping, milestones along shortest paths, and
//! the lower-bound gadget whose profile count grows polynomially.
//!
//! The profile of `u` over a vertex set `S` relative to a pivot `s0 ∈ S` is
//! the vector `s ↦ dist(u, s) - dist(u, s0)` over `S` in increasing id order.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::division::RDivision;
use crate::error::{Error, Result};
use crate::graph::{search, sssp, sssp_to_set, Dist, Graph, UNREACHABLE};

/// Distances in `G - A` from every boundary vertex of one region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryDistances {
    pub region: usize,
    pub boundary: Vec<usize>,
    pub pivot: usize,
    /// `rows[i][v]` is the distance from `boundary[i]` to `v` in `G - A`.
    pub rows: Vec<Vec<Dist>>,
    /// Distance from the pivot to every vertex in `G - A`.
    pub pivot_row: Vec<Dist>,
}

/// Boundary distance rows for every region of `div`, computed in the
/// subgraph induced by the division's domain.
pub fn boundary_distances(g: &Graph, div: &RDivision) -> Vec<BoundaryDistances> {
    (0..div.len())
        .into_par_iter()
        .map(|i| {
            let rows: Vec<Vec<Dist>> =
                div.boundary[i].iter().map(|&s| search(g, &[s], |v| div.domain[v], |_| true)).collect();
            let pivot_row = match div.boundary[i].binary_search(&div.pivot[i]) {
                Ok(pos) => rows[pos].clone(),
                Err(_) => search(g, &[div.pivot[i]], |v| div.domain[v], |_| true),
            };
            BoundaryDistances {
                region: i,
                boundary: div.boundary[i].clone(),
                pivot: div.pivot[i],
                rows,
                pivot_row,
            }
        })
        .collect()
}

/// Profile of `v` over the region's boundary; `None` if `v` cannot reach it.
pub fn profile_of(v: usize, bd: &BoundaryDistances) -> Option<Vec<i64>> {
    let base = bd.pivot_row[v];
    if base == UNREACHABLE {
        return None;
    }
    bd.rows.iter().map(|row| (row[v] != UNREACHABLE).then(|| row[v] as i64 - base as i64)).collect()
}

/// Vertices sharing one profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileClass {
    pub profile: Vec<i64>,
    pub members: Vec<usize>,
}

/// Partition of a vertex set by profile. Classes are sorted by profile
/// vector, members by id. Vertices that cannot reach the pivot are kept apart.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProfileTable {
    pub classes: Vec<ProfileClass>,
    pub unreachable: Vec<usize>,
}

impl ProfileTable {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    /// `(class size, number of classes of that size)`, by increasing size.
    pub fn histogram(&self) -> Vec<(usize, usize)> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for class in &self.classes {
            *counts.entry(class.members.len()).or_default() += 1;
        }
        let mut hist: Vec<_> = counts.into_iter().collect();
        hist.sort_unstable();
        hist
    }
}

/// Groups vertices by profile one distance row at a time.
///
/// Each row splits the current classes by the difference to the pivot
/// distance, so only the class of every vertex and one profile per class are
/// held in memory.
#[derive(Clone, Debug)]
pub struct ProfileRefiner {
    vertices: Vec<usize>,
    base: Vec<Dist>,
    class: Vec<u32>,
    profiles: Vec<Vec<i64>>,
    unreachable: Vec<usize>,
}

impl ProfileRefiner {
    /// Starts with one class holding every vertex reachable from the pivot.
    pub fn new(vertices: &[usize], pivot_row: &[Dist]) -> Self {
        let (reach, unreachable): (Vec<usize>, Vec<usize>) =
            vertices.iter().copied().partition(|&v| pivot_row[v] != UNREACHABLE);
        let base = reach.iter().map(|&v| pivot_row[v]).collect();
        let class = vec![0; reach.len()];
        let profiles = if reach.is_empty() { Vec::new() } else { vec![Vec::new()] };
        ProfileRefiner { vertices: reach, base, class, profiles, unreachable }
    }

    /// Appends the profile entry given by the distance row of the next
    /// boundary vertex.
    pub fn push_row(&mut self, row: &[Dist]) {
        let mut split: HashMap<(u32, i64), u32> = HashMap::new();
        let mut next_profiles: Vec<Vec<i64>> = Vec::new();
        for (i, &v) in self.vertices.iter().enumerate() {
            let d = row[v];
            let diff = if d == UNREACHABLE { i64::MAX } else { d as i64 - self.base[i] as i64 };
            let old = self.class[i];
            let id = *split.entry((old, diff)).or_insert_with(|| {
                let mut p = self.profiles[old as usize].clone();
                p.push(diff);
                next_profiles.push(p);
                (next_profiles.len() - 1) as u32
            });
            self.class[i] = id;
        }
        self.profiles = next_profiles;
    }

    pub fn finish(self) -> ProfileTable {
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.profiles.len()];
        for (i, &v) in self.vertices.iter().enumerate() {
            members[self.class[i] as usize].push(v);
        }
        let mut classes: Vec<ProfileClass> = self
            .profiles
            .into_iter()
            .zip(members)
            .map(|(profile, mut members)| {
                members.sort_unstable();
                ProfileClass { profile, members }
            })
            .collect();
        classes.sort_unstable_by(|a, b| a.profile.cmp(&b.profile));
        let mut unreachable = self.unreachable;
        unreachable.sort_unstable();
        ProfileTable { classes, unreachable }
    }
}

/// Partitions `vertices` by their profile over the region's boundary.
pub fn group_by_profile(vertices: &[usize], bd: &BoundaryDistances) -> ProfileTable {
    let mut refiner = ProfileRefiner::new(vertices, &bd.pivot_row);
    for row in &bd.rows {
        refiner.push_row(row);
    }
    refiner.finish()
}

/// Partitions `vertices` by their profile over `set` relative to `pivot`,
/// with distances taken in all of `g`.
pub fn group_over_set(g: &Graph, set: &[usize], pivot: usize, vertices: &[usize]) -> Result<ProfileTable> {
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.binary_search(&pivot).is_err() {
        return Err(Error::Precondition("pivot must belong to the set".into()));
    }
    for &v in vertices {
        g.check_vertex(v)?;
    }
    let pivot_row = sssp(g, pivot)?.dist;
    let mut refiner = ProfileRefiner::new(vertices, &pivot_row);
    for &s in &set {
        refiner.push_row(&sssp(g, s)?.dist);
    }
    Ok(refiner.finish())
}

/// The lower-bound construction: a path `R` with `k` equally spaced anchors
/// and one vertex per distance vector, joined to the anchors by paths of the
/// prescribed lengths.
#[derive(Clone, Debug)]
pub struct ProfileGadget {
    pub graph: Graph,
    /// Vertices of `R` in path order.
    pub path: Vec<usize>,
    /// Anchors `v_1..v_k` on `R`.
    pub anchors: Vec<usize>,
    /// The vertex `u(a)` for every vector in `labels`.
    pub gadget: Vec<usize>,
    /// Distance vectors `a` with `a_1 = ℓ` and `a_i ∈ ℓ..=ℓ+p`.
    pub labels: Vec<Vec<u64>>,
    pub spacing: u64,
}

/// Vertex budget for [`gen_profile_gadget`].
pub const GADGET_VERTEX_CAP: u64 = 5_000_000;

pub fn gen_profile_gadget(k: usize, ell: u64) -> Result<ProfileGadget> {
    if k < 2 {
        return Err(Error::Precondition("the gadget needs k >= 2".into()));
    }
    let k64 = k as u64;
    if ell < 2 * (k64 - 1) {
        return Err(Error::Precondition(format!("ℓ must be at least {}", 2 * (k64 - 1))));
    }
    let p = ell / (k64 - 1);
    let vectors = (p + 1).checked_pow(k as u32 - 1);
    let per_vector = 1 + (k64 - 1) * (ell - 1) + (k64 - 1) * (ell + p - 1);
    let total = vectors.and_then(|c| c.checked_mul(per_vector)).and_then(|t| t.checked_add(ell + 1));
    match total {
        Some(t) if t <= GADGET_VERTEX_CAP => {}
        _ => return Err(Error::SizeGuard(format!("gadget for k = {k}, ℓ = {ell} is too large"))),
    }

    let path: Vec<usize> = (0..=ell as usize).collect();
    let anchors: Vec<usize> = (0..k).map(|i| i * p as usize).collect();
    let mut edges: Vec<(usize, usize)> = (1..path.len()).map(|i| (i - 1, i)).collect();
    let mut next = path.len();
    let mut gadget = Vec::new();
    let mut labels = Vec::new();
    let mut a = vec![ell; k];
    loop {
        let u = next;
        next += 1;
        for (i, &len) in a.iter().enumerate() {
            let mut prev = u;
            for _ in 1..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, anchors[i]));
        }
        gadget.push(u);
        labels.push(a.clone());
        // odometer over coordinates 2..k
        let mut i = k - 1;
        loop {
            if i == 0 {
                let graph = Graph::unweighted(next, &edges)?;
                return Ok(ProfileGadget { graph, path, anchors, gadget, labels, spacing: p });
            }
            if a[i] < ell + p {
                a[i] += 1;
                break;
            }
            a[i] = ell;
            i -= 1;
        }
    }
}

/// A shortest path from `v0` to a set `R` with the profile of every path
/// vertex over `R` relative to the endpoint `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilestoneReport {
    /// `path[0] = v0`, last entry is `x`.
    pub path: Vec<usize>,
    /// `R` in increasing id order; profile entries follow this order.
    pub set: Vec<usize>,
    pub profiles: Vec<Vec<i64>>,
    /// Path vertices whose profile differs from their successor's, plus `x`.
    pub milestones: Vec<usize>,
}

/// Follows a shortest path from `v0` to `set`, always stepping to the
/// smallest-id neighbor that stays on a shortest path.
pub fn milestones(g: &Graph, set: &[usize], v0: usize) -> Result<MilestoneReport> {
    g.check_vertex(v0)?;
    let to_set = sssp_to_set(g, set)?;
    if to_set.dist[v0] == UNREACHABLE {
        return Err(Error::Disconnected);
    }
    let mut path = vec![v0];
    let mut cur = v0;
    while to_set.dist[cur] > 0 {
        let d = to_set.dist[cur];
        cur = g
            .adjacent(cur)
            .filter(|&(x, w)| to_set.dist[x] != UNREACHABLE && to_set.dist[x] + w == d)
            .map(|(x, _)| x)
            .min()
            .expect("a shortest path continues");
        path.push(cur);
    }
    let x = cur;
    let rows: Vec<Vec<Dist>> = to_set.sources.iter().map(|&y| search(g, &[y], |_| true, |_| true)).collect();
    let x_row = &rows[to_set.sources.binary_search(&x).expect("endpoint lies in the set")];
    let mut profiles = Vec::with_capacity(path.len());
    for &v in &path {
        let mut profile = Vec::with_capacity(rows.len());
        for row in &rows {
            if row[v] == UNREACHABLE {
                return Err(Error::Disconnected);
            }
            profile.push(row[v] as i64 - x_row[v] as i64);
        }
        profiles.push(profile);
    }
    let mut list: Vec<usize> = (0..path.len() - 1).filter(|&i| profiles[i] != profiles[i + 1]).map(|i| path[i]).collect();
    list.push(x);
    Ok(MilestoneReport { path, set: to_set.sources, profiles, milestones: list })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::{build_r_division, load_division};

    fn path(n: usize) -> Graph {
        Graph::unweighted(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn single_region_has_no_rows() {
        let g = path(6);
        let div = build_r_division(&g, 10).unwrap();
        let bd = boundary_distances(&g, &div);
        assert!(bd[0].rows.is_empty());
        let table = group_by_profile(&[0, 1, 2], &bd[0]);
        assert_eq!(table.count(), 1);
    }

    #[test]
    fn path_split_rows_and_profiles() {
        let g = path(10);
        let div = load_division("1 2 3 4 5 6\n6 7 8 9 10\n", &g, &[]).unwrap();
        let bd = boundary_distances(&g, &div);
        for v in 0..10 {
            assert_eq!(bd[0].rows[0][v], (v as i64 - 5).unsigned_abs());
        }
        assert_eq!(profile_of(9, &bd[0]), Some(vec![0]));
    }

    #[test]
    fn two_boundary_vertices() {
        let g = path(10);
        let div = load_division("4 5 6 7 8\n1 2 3 4\n8 9 10\n", &g, &[]).unwrap();
        assert_eq!(div.boundary[0], vec![3, 7]);
        let bd = boundary_distances(&g, &div);
        assert_eq!(profile_of(0, &bd[0]), Some(vec![0, 4]));
        assert_eq!(profile_of(3, &bd[0]), Some(vec![0, 4]));
        assert_eq!(profile_of(5, &bd[0]), Some(vec![0, 0]));
        let table = group_by_profile(&[0, 1, 2, 8, 9], &bd[0]);
        assert_eq!(table.count(), 2);
        assert_eq!(table.classes[0].members, vec![8, 9]);
        assert_eq!(table.histogram(), vec![(2, 1), (3, 1)]);
    }

    #[test]
    fn gadget_distances_and_counts() {
        for (k, ell, expected) in [(2usize, 4u64, 5usize), (3, 8, 25)] {
            let gadget = gen_profile_gadget(k, ell).unwrap();
            assert_eq!(gadget.gadget.len(), expected);
            for (&u, label) in gadget.gadget.iter().zip(&gadget.labels) {
                let d = sssp(&gadget.graph, u).unwrap().dist;
                for (i, &anchor) in gadget.anchors.iter().enumerate() {
                    assert_eq!(d[anchor], label[i]);
                }
            }
            let table = group_over_set(&gadget.graph, &gadget.path, gadget.anchors[0], &gadget.gadget).unwrap();
            assert_eq!(table.count(), expected);
        }
        assert!(matches!(gen_profile_gadget(3, 2), Err(Error::Precondition(_))));
        assert!(matches!(gen_profile_gadget(6, 400), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn milestone_cases() {
        let g = path(10);
        let inside = milestones(&g, &[3, 4], 4).unwrap();
        assert_eq!(inside.milestones, vec![4]);
        let far = milestones(&g, &[9], 0).unwrap();
        assert_eq!(far.path.len(), 10);
        assert_eq!(far.milestones, vec![9]);
    }
}
