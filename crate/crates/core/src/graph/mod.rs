//! Undirected graphs in compressed sparse row form, plus the shortest-path
//! primitives everything else is built on.

mod parse;
mod sssp;

pub use parse::{parse_graph, write_graph};
pub use sssp::{apsp_rows, is_connected, naive_ecc, search, sssp, sssp_in, sssp_to_set, sssp_through, DistVector};

use crate::error::{Error, Result};

/// Exact path length. Weights are positive integers, so all distances are too.
pub type Dist = u64;

/// Marker for vertices not reachable from the source(s).
pub const UNREACHABLE: Dist = Dist::MAX;

/// Immutable undirected graph.
///
/// Adjacency lists are sorted by neighbor id. Weights are only stored when at
/// least one edge is heavier than 1, in which case searches use Dijkstra
/// instead of BFS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Option<Vec<Dist>>,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples with 0-based endpoints.
    ///
    /// Self-loops are dropped and parallel edges collapse to the lightest one.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, Dist)>) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::SizeGuard(format!("{n} vertices do not fit 32-bit ids")));
        }
        let mut list: Vec<(u32, u32, Dist)> = Vec::new();
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::BadVertex { vertex: x, n });
                }
            }
            if w == 0 {
                return Err(Error::Precondition("edge weights must be positive".into()));
            }
            if u == v {
                continue;
            }
            list.push((u as u32, v as u32, w));
            list.push((v as u32, u as u32, w));
        }
        list.sort_unstable();
        list.dedup_by(|next, kept| next.0 == kept.0 && next.1 == kept.1);

        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in &list {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let weighted = list.iter().any(|&(_, _, w)| w != 1);
        let targets = list.iter().map(|&(_, v, _)| v).collect();
        let weights = weighted.then(|| list.iter().map(|&(_, _, w)| w).collect());
        Ok(Graph { offsets, targets, weights })
    }

    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges(n, edges.iter().map(|&(u, v)| (u, v, 1)))
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.targets[self.offsets[v]..self.offsets[v + 1]].iter().map(|&t| t as usize)
    }

    /// Neighbors of `v` together with edge weights.
    pub fn adjacent(&self, v: usize) -> impl Iterator<Item = (usize, Dist)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        let weights = self.weights.as_deref();
        range.map(move |i| (self.targets[i] as usize, weights.map_or(1, |w| w[i])))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_weight(u, v).is_some()
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<Dist> {
        let range = self.offsets[u]..self.offsets[u + 1];
        let slice = &self.targets[range.clone()];
        let pos = slice.binary_search(&(v as u32)).ok()?;
        Some(self.weights.as_ref().map_or(1, |w| w[range.start + pos]))
    }

    /// Every undirected edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Dist)> + '_ {
        (0..self.n()).flat_map(move |u| self.adjacent(u).filter(move |&(v, _)| u < v).map(move |(v, w)| (u, v, w)))
    }

    pub fn total_weight(&self) -> Dist {
        self.edges().map(|(_, _, w)| w).sum()
    }

    /// Same graph, but with weights stored explicitly so searches take the
    /// Dijkstra route even when every weight is 1.
    pub fn with_explicit_weights(&self) -> Self {
        let weights = self.weights.clone().unwrap_or_else(|| vec![1; self.targets.len()]);
        Graph { offsets: self.offsets.clone(), targets: self.targets.clone(), weights: Some(weights) }
    }

    /// Induced subgraph on `vertices` (in the given order). Returns the
    /// subgraph and, for every vertex of `self`, its local id if selected.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<Option<usize>>) {
        let mut local = vec![None; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = Some(i);
        }
        let edges: Vec<_> = vertices
            .iter()
            .enumerate()
            .flat_map(|(i, &v)| {
                let local = &local;
                self.adjacent(v).filter_map(move |(x, w)| local[x].filter(|&j| i < j).map(|j| (i, j, w)))
            })
            .collect();
        let sub = Graph::from_edges(vertices.len(), edges).expect("induced edges are in range");
        (sub, local)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::BadVertex { vertex: v, n: self.n() })
        }
    }
}

/// Indicator vector over `0..n` for a list of vertices.
pub fn mask_of(n: usize, vertices: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in vertices {
        mask[v] = true;
    }
    mask
}

/// Connected components of the subgraph induced by `mask`, each sorted, in
/// order of their smallest vertex.
pub fn components(g: &Graph, mask: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for start in 0..g.n() {
        if !mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for x in g.neighbors(v) {
                if mask[x] && !seen[x] {
                    seen[x] = true;
                    comp.push(x);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_edges_keep_minimum_weight() {
        let g = Graph::from_edges(2, [(0, 1, 4), (1, 0, 7)]).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.edge_weight(0, 1), Some(4));
        assert_eq!(g.edge_weight(1, 0), Some(4));
    }

    #[test]
    fn unit_weights_are_not_stored() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        assert!(!g.is_weighted());
        assert!(g.with_explicit_weights().is_weighted());
    }

    #[test]
    fn self_loops_dropped() {
        let g = Graph::from_edges(2, [(0, 0, 1), (0, 1, 1)]).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.degree(0), 1);
    }

    #[test]
    fn induced_keeps_only_inner_edges() {
        let g = Graph::unweighted(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (sub, local) = g.induced(&[0, 1, 2]);
        assert_eq!(sub.m(), 2);
        assert_eq!(local[3], None);
        assert_eq!(local[2], Some(2));
    }

    #[test]
    fn components_split_masked_graph() {
        let g = Graph::unweighted(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let mask = [true, true, false, true, true];
        assert_eq!(components(&g, &mask), vec![vec![0, 1], vec![3, 4]]);
    }
}
