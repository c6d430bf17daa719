use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::{Dist, Graph, UNREACHABLE};
use crate::error::{Error, Result};

/// Distances from a source vertex or a source set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistVector {
    pub sources: Vec<usize>,
    pub dist: Vec<Dist>,
}

impl DistVector {
    pub fn get(&self, v: usize) -> Option<Dist> {
        let d = self.dist[v];
        (d != UNREACHABLE).then_some(d)
    }

    pub fn all_reachable(&self) -> bool {
        self.dist.iter().all(|&d| d != UNREACHABLE)
    }

    pub fn as_slice(&self) -> &[Dist] {
        &self.dist
    }
}

/// Generic multi-source search.
///
/// A vertex is only ever labelled if `enter` accepts it, and its neighbors are
/// only scanned if it is a source or `expand` accepts it. BFS is used for
/// unweighted graphs, a binary-heap Dijkstra otherwise.
pub fn search(
    g: &Graph,
    sources: &[usize],
    enter: impl Fn(usize) -> bool,
    expand: impl Fn(usize) -> bool,
) -> Vec<Dist> {
    let n = g.n();
    let mut dist = vec![UNREACHABLE; n];
    let mut is_source = Vec::new();
    if sources.len() > 1 {
        is_source = vec![false; n];
        for &s in sources {
            is_source[s] = true;
        }
    }
    let source_check = |v: usize| if sources.len() == 1 { sources[0] == v } else { is_source[v] };

    if !g.is_weighted() {
        let mut queue: Vec<u32> = Vec::with_capacity(n.min(1024));
        for &s in sources {
            if dist[s] == UNREACHABLE {
                dist[s] = 0;
                queue.push(s as u32);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head] as usize;
            head += 1;
            if !source_check(v) && !expand(v) {
                continue;
            }
            let next = dist[v] + 1;
            for x in g.neighbors(v) {
                if dist[x] == UNREACHABLE && enter(x) {
                    dist[x] = next;
                    queue.push(x as u32);
                }
            }
        }
    } else {
        let mut heap = BinaryHeap::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                heap.push(Reverse((0, s as u32)));
            }
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            let v = v as usize;
            if d > dist[v] {
                continue;
            }
            if !source_check(v) && !expand(v) {
                continue;
            }
            for (x, w) in g.adjacent(v) {
                let nd = d + w;
                if nd < dist[x] && enter(x) {
                    dist[x] = nd;
                    heap.push(Reverse((nd, x as u32)));
                }
            }
        }
    }
    dist
}

pub fn sssp(g: &Graph, source: usize) -> Result<DistVector> {
    g.check_vertex(source)?;
    Ok(DistVector { sources: vec![source], dist: search(g, &[source], |_| true, |_| true) })
}

/// `dist[v] = min over s in set of dist(v, s)`, from a single multi-source run.
pub fn sssp_to_set(g: &Graph, set: &[usize]) -> Result<DistVector> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    for &s in set {
        g.check_vertex(s)?;
    }
    let mut sources = set.to_vec();
    sources.sort_unstable();
    sources.dedup();
    let dist = search(g, &sources, |_| true, |_| true);
    Ok(DistVector { sources, dist })
}

/// Distances inside the subgraph induced by `mask`.
pub fn sssp_in(g: &Graph, sources: &[usize], mask: &[bool]) -> Vec<Dist> {
    search(g, sources, |v| mask[v], |_| true)
}

/// Distances along paths whose internal vertices all satisfy `interior`.
/// Endpoints may be arbitrary.
pub fn sssp_through(g: &Graph, source: usize, interior: &[bool]) -> Vec<Dist> {
    search(g, &[source], |_| true, |v| interior[v])
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() == 0 || search(g, &[0], |_| true, |_| true).iter().all(|&d| d != UNREACHABLE)
}

/// Distance rows from every vertex (parallel over sources).
pub fn apsp_rows(g: &Graph) -> Vec<Vec<Dist>> {
    (0..g.n()).into_par_iter().map(|s| search(g, &[s], |_| true, |_| true)).collect()
}

/// Reference X-eccentricities: one full search per vertex.
///
/// Returns `ecc_X(v)` for every vertex `v`. Fails on a disconnected graph.
pub fn naive_ecc(g: &Graph, targets: &[usize]) -> Result<Vec<Dist>> {
    if targets.is_empty() {
        return Err(Error::EmptySet);
    }
    for &x in targets {
        g.check_vertex(x)?;
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let ecc = (0..g.n())
        .into_par_iter()
        .map(|v| {
            let row = search(g, &[v], |_| true, |_| true);
            targets.iter().map(|&x| row[x]).max().unwrap_or(0)
        })
        .collect();
    Ok(ecc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::unweighted(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn path_and_triangle() {
        assert_eq!(sssp(&path(5), 0).unwrap().dist, vec![0, 1, 2, 3, 4]);
        let k3 = Graph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(sssp(&k3, 0).unwrap().dist, vec![0, 1, 1]);
    }

    #[test]
    fn unreachable_marked() {
        let g = Graph::unweighted(3, &[(0, 1)]).unwrap();
        let d = sssp(&g, 0).unwrap();
        assert_eq!(d.get(2), None);
        assert!(!d.all_reachable());
        assert!(matches!(naive_ecc(&g, &[0, 1, 2]), Err(Error::Disconnected)));
    }

    #[test]
    fn to_set() {
        assert_eq!(sssp_to_set(&path(5), &[0, 4]).unwrap().dist, vec![0, 1, 2, 1, 0]);
        assert_eq!(sssp_to_set(&path(5), &[0, 1, 2, 3, 4]).unwrap().dist, vec![0; 5]);
        assert!(matches!(sssp_to_set(&path(5), &[]), Err(Error::EmptySet)));
    }

    #[test]
    fn naive_ecc_small_cases() {
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(naive_ecc(&path(5), &all).unwrap(), vec![4, 3, 2, 3, 4]);
        let star = Graph::unweighted(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(naive_ecc(&star, &[0, 1, 2, 3]).unwrap(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn weighted_dijkstra() {
        let g = Graph::from_edges(4, [(0, 1, 5), (0, 2, 1), (2, 1, 1), (1, 3, 2)]).unwrap();
        assert_eq!(sssp(&g, 0).unwrap().dist, vec![0, 2, 1, 4]);
    }

    #[test]
    fn through_restricts_internal_vertices() {
        // cycle 0-1-2-3-4-5-0; interior {1, 2} only
        let g = Graph::unweighted(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let interior = [false, true, true, false, false, false];
        let d = sssp_through(&g, 0, &interior);
        assert_eq!(d[3], 3);
        assert_eq!(d[5], 1);
        assert_eq!(d[4], UNREACHABLE);
    }

    #[test]
    fn masked_search_stays_inside() {
        let g = Graph::unweighted(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let d = sssp_in(&g, &[0], &[true, true, true, false]);
        assert_eq!(d, vec![0, 1, 2, UNREACHABLE]);
    }
}
