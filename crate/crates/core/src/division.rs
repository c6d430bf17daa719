//! r-divisions: covers of a vertex domain by small connected regions.
//!
//! Regions are produced by recursive BFS-level separation. A piece larger
//! than `r` is layered by BFS from a pseudo-peripheral vertex and cut at the
//! smallest level that leaves both sides at most two thirds of the piece; the
//! cut level stays with the lower side, and every side is split into its
//! connected components before recursing. The result is a partition of the
//! domain into connected pieces of size at most `r`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{components, is_connected, Graph};

/// A cover of `domain` by connected regions.
///
/// `boundary[i]` is `regions[i] ∩ N(domain ∖ regions[i])`, with neighborhoods
/// taken in the subgraph induced by `domain`. `pivot[i]` is the smallest
/// boundary vertex, or the smallest vertex of the region if it has no
/// boundary. `home_region[v]` is the first region containing `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RDivision {
    pub regions: Vec<Vec<usize>>,
    pub boundary: Vec<Vec<usize>>,
    pub pivot: Vec<usize>,
    pub home_region: Vec<Option<usize>>,
    pub domain: Vec<bool>,
}

impl RDivision {
    /// Wraps explicit regions, computing boundaries, pivots, and home regions.
    pub fn from_regions(g: &Graph, domain: Vec<bool>, mut regions: Vec<Vec<usize>>) -> Result<Self> {
        let n = g.n();
        if domain.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: domain.len() });
        }
        let mut home_region = vec![None; n];
        for (i, region) in regions.iter_mut().enumerate() {
            if region.is_empty() {
                return Err(Error::Precondition(format!("region {} is empty", i + 1)));
            }
            region.sort_unstable();
            region.dedup();
            for &v in region.iter() {
                g.check_vertex(v)?;
                home_region[v].get_or_insert(i);
            }
        }
        let mut stamp = vec![usize::MAX; n];
        let mut boundary = Vec::with_capacity(regions.len());
        let mut pivot = Vec::with_capacity(regions.len());
        for (i, region) in regions.iter().enumerate() {
            let b = boundary_of(g, &domain, region, &mut stamp, i);
            pivot.push(b.first().copied().unwrap_or(region[0]));
            boundary.push(b);
        }
        Ok(RDivision { regions, boundary, pivot, home_region, domain })
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn boundary_sum(&self) -> usize {
        self.boundary.iter().map(Vec::len).sum()
    }

    pub fn max_region(&self) -> usize {
        self.regions.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Writes the regions in the format read by [`load_division`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for region in &self.regions {
            let line: Vec<String> = region.iter().map(|v| (v + 1).to_string()).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }
}

fn boundary_of(g: &Graph, domain: &[bool], region: &[usize], stamp: &mut [usize], id: usize) -> Vec<usize> {
    for &v in region {
        stamp[v] = id;
    }
    region
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).any(|x| domain[x] && stamp[x] != id))
        .collect()
}

/// Default region size for `n` vertices: `max(4, ⌈n^ρ⌉)`.
pub fn default_r(n: usize, rho: f64) -> usize {
    ((n as f64).powf(rho).ceil() as usize).max(4)
}

/// Divides a connected graph into connected regions of at most `r` vertices.
pub fn build_r_division(g: &Graph, r: usize) -> Result<RDivision> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    build_r_division_in(g, vec![true; g.n()], r)
}

/// Divides the subgraph induced by `domain`, which may be disconnected; every
/// component is divided separately.
pub fn build_r_division_in(g: &Graph, domain: Vec<bool>, r: usize) -> Result<RDivision> {
    if r < 2 {
        return Err(Error::Precondition(format!("r must be at least 2, got {r}")));
    }
    if domain.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: domain.len() });
    }
    let mut splitter = Splitter::new(g);
    let mut stack = components(g, &domain);
    stack.reverse();
    let mut regions = Vec::new();
    while let Some(piece) = stack.pop() {
        if piece.len() <= r {
            regions.push(piece);
            continue;
        }
        let (lower, upper) = splitter.split(&piece);
        let mut parts = splitter.components_of(&upper);
        parts.extend(splitter.components_of(&lower));
        stack.extend(parts);
    }
    regions.sort_unstable_by_key(|region| region[0]);
    RDivision::from_regions(g, domain, regions)
}

/// Scratch state shared by all splits of one division build. Stamps avoid
/// clearing `n`-sized arrays per piece.
struct Splitter<'g> {
    g: &'g Graph,
    member: Vec<u32>,
    seen: Vec<u32>,
    epoch: u32,
}

impl<'g> Splitter<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.n();
        Splitter { g, member: vec![0; n], seen: vec![0; n], epoch: 0 }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch += 1;
        self.epoch
    }

    fn mark(&mut self, vertices: &[usize]) -> u32 {
        let e = self.next_epoch();
        for &v in vertices {
            self.member[v] = e;
        }
        e
    }

    /// BFS layers inside the marked piece.
    fn layers(&mut self, inside: u32, start: usize) -> Vec<Vec<usize>> {
        let seen = self.next_epoch();
        self.seen[start] = seen;
        let mut layers = vec![vec![start]];
        loop {
            let mut next = Vec::new();
            for &v in layers.last().unwrap() {
                for x in self.g.neighbors(v) {
                    if self.member[x] == inside && self.seen[x] != seen {
                        self.seen[x] = seen;
                        next.push(x);
                    }
                }
            }
            if next.is_empty() {
                return layers;
            }
            next.sort_unstable();
            layers.push(next);
        }
    }

    /// Splits a connected piece into a lower part (levels up to and including
    /// the separator level) and an upper part.
    fn split(&mut self, piece: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let inside = self.mark(piece);
        let probe = self.layers(inside, piece[0]);
        let far = probe.last().unwrap()[0];
        let layers = self.layers(inside, far);
        let total = piece.len();
        let cap = (2 * total).div_ceil(3);
        let mut best: Option<(usize, usize)> = None;
        let mut balanced: Option<(usize, usize)> = None;
        let mut lower = 0;
        for (i, layer) in layers.iter().enumerate().take(layers.len() - 1) {
            lower += layer.len();
            let upper = total - lower;
            if lower <= cap && upper <= cap && best.is_none_or(|(size, _)| layer.len() < size) {
                best = Some((layer.len(), i));
            }
            let worst = lower.max(upper);
            if balanced.is_none_or(|(w, _)| worst < w) {
                balanced = Some((worst, i));
            }
        }
        let cut = best.or(balanced).map(|(_, i)| i).expect("piece has at least two levels");
        let lower: Vec<usize> = layers[..=cut].concat();
        let upper: Vec<usize> = layers[cut + 1..].concat();
        (lower, upper)
    }

    fn components_of(&mut self, part: &[usize]) -> Vec<Vec<usize>> {
        let inside = self.mark(part);
        let seen = self.next_epoch();
        let mut out = Vec::new();
        let mut sorted = part.to_vec();
        sorted.sort_unstable();
        for &start in &sorted {
            if self.seen[start] == seen {
                continue;
            }
            self.seen[start] = seen;
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head];
                head += 1;
                for x in self.g.neighbors(v) {
                    if self.member[x] == inside && self.seen[x] != seen {
                        self.seen[x] = seen;
                        comp.push(x);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Outcome of [`validate_division`]: one flag per invariant plus size data.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisionReport {
    pub cover: bool,
    pub within_domain: bool,
    pub size: bool,
    pub connected: bool,
    pub boundary: bool,
    pub pivots: bool,
    pub home: bool,
    pub boundary_sum: usize,
    pub max_region: usize,
    pub failures: Vec<String>,
}

impl DivisionReport {
    pub fn passed(&self) -> bool {
        self.cover && self.within_domain && self.size && self.connected && self.boundary && self.pivots && self.home
    }
}

/// Checks every structural invariant of `div`. `r` bounds region sizes when
/// given.
pub fn validate_division(g: &Graph, div: &RDivision, r: Option<usize>) -> DivisionReport {
    let n = g.n();
    let mut report = DivisionReport {
        cover: true,
        within_domain: true,
        size: true,
        connected: true,
        boundary: true,
        pivots: true,
        home: true,
        boundary_sum: div.boundary_sum(),
        max_region: div.max_region(),
        failures: Vec::new(),
    };
    let shapes_ok = div.domain.len() == n
        && div.home_region.len() == n
        && div.boundary.len() == div.regions.len()
        && div.pivot.len() == div.regions.len()
        && div.regions.iter().flatten().all(|&v| v < n);
    if !shapes_ok {
        report.cover = false;
        report.failures.push("division does not match the graph's shape".into());
        return report;
    }

    let mut covered = vec![false; n];
    let mut stamp = vec![usize::MAX; n];
    for (i, region) in div.regions.iter().enumerate() {
        for &v in region {
            covered[v] = true;
            if !div.domain[v] {
                report.within_domain = false;
                report.failures.push(format!("region {} contains vertex {} outside the domain", i + 1, v + 1));
            }
        }
        if let Some(r) = r {
            if region.len() > r {
                report.size = false;
                report.failures.push(format!("region {} has {} vertices, cap is {r}", i + 1, region.len()));
            }
        }
        let mask = region_mask(n, region);
        if region.is_empty() || components(g, &mask).len() != 1 {
            report.connected = false;
            report.failures.push(format!("region {} is not connected", i + 1));
        }
        let expected = boundary_of(g, &div.domain, region, &mut stamp, i);
        let mut given = div.boundary[i].clone();
        given.sort_unstable();
        if given != expected {
            report.boundary = false;
            report.failures.push(format!("region {} has a wrong boundary", i + 1));
        }
        let pivot_ok = match expected.first() {
            Some(_) => expected.contains(&div.pivot[i]),
            None => region.contains(&div.pivot[i]),
        };
        if !pivot_ok {
            report.pivots = false;
            report.failures.push(format!("region {} has an invalid pivot", i + 1));
        }
    }
    for v in 0..n {
        if div.domain[v] && !covered[v] {
            report.cover = false;
            report.failures.push(format!("vertex {} is in no region", v + 1));
        }
        if let Some(h) = div.home_region[v] {
            if div.regions.get(h).is_none_or(|region| region.binary_search(&v).is_err()) {
                report.home = false;
                report.failures.push(format!("vertex {} has a home region that misses it", v + 1));
            }
        } else if covered[v] {
            report.home = false;
            report.failures.push(format!("vertex {} has no home region", v + 1));
        }
    }
    report
}

fn region_mask(n: usize, region: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in region {
        mask[v] = true;
    }
    mask
}

/// Parses a division file (one region per line, 1-based ids, `c` comments)
/// over the domain `V ∖ apices`. The result is not validated.
pub fn load_division(text: &str, g: &Graph, apices: &[usize]) -> Result<RDivision> {
    let n = g.n();
    let mut regions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace().peekable();
        match tokens.peek() {
            None => continue,
            Some(&"c") => continue,
            _ => {}
        }
        let mut region = Vec::new();
        for t in tokens {
            let id: i64 = t.parse().map_err(|_| Error::parse(line, format!("bad vertex id `{t}`")))?;
            if id < 1 || id as u64 > n as u64 {
                return Err(Error::VertexOutOfRange { line, vertex: id, n });
            }
            region.push(id as usize - 1);
        }
        regions.push(region);
    }
    let mut domain = vec![true; n];
    for &a in apices {
        g.check_vertex(a)?;
        domain[a] = false;
    }
    RDivision::from_regions(g, domain, regions)
}
