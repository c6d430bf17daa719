//! Static suffix-range maximum queries in `d` dimensions and the max-min
//! queries derived from them.
//!
//! A suffix range `Range(r)` holds every point `x` with `x_i >= r_i` for all
//! `i`. [`SuffixMaxIndex`] is a layered range tree: the first coordinate is
//! resolved by a balanced tree over the points sorted by that coordinate, each
//! internal node carrying an index over the remaining coordinates, and the last
//! coordinate is a sorted array with suffix maxima. Small point sets are
//! scanned directly.
//!
//! [`MaxMinIndex`] answers `max_v min_i (v_i + r_i)` with one sub-index per
//! coordinate: a pair `(v, i)` attains the answer exactly when `i` is the
//! minimizing coordinate of `v`, i.e. when `v_j - v_i >= r_i - r_j` for every
//! `j`. That is a suffix range over the difference vectors of `v`, weighted by
//! `v_i`.

use crate::error::{Error, Result};

/// Dimension cap for [`WeightedPointSet`].
pub const DEFAULT_DIM_CAP: usize = 8;

/// Largest magnitude a coordinate, weight, or max-min shift may have. Keeps
/// every difference and sum the indices form well inside `i64`.
pub const COORD_LIMIT: i64 = 1 << 52;

const LEAF_SIZE: usize = 16;
const NO_CHILD: u32 = u32::MAX;

fn check_finite(x: i64) -> Result<()> {
    if (-COORD_LIMIT..=COORD_LIMIT).contains(&x) {
        Ok(())
    } else {
        Err(Error::NonFiniteCoordinate(x))
    }
}

/// Integer points of a fixed dimension, each with an integer weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedPointSet {
    dim: usize,
    coords: Vec<i64>,
    weights: Vec<i64>,
}

impl WeightedPointSet {
    pub fn new(dim: usize) -> Result<Self> {
        Self::with_cap(dim, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(dim: usize, cap: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        Ok(WeightedPointSet { dim, coords: Vec::new(), weights: Vec::new() })
    }

    pub fn push(&mut self, point: &[i64], weight: i64) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: point.len() });
        }
        for &c in point {
            check_finite(c)?;
        }
        check_finite(weight)?;
        self.coords.extend_from_slice(point);
        self.weights.push(weight);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }
}

/// Suffix-range maximum index over a [`WeightedPointSet`].
#[derive(Clone, Debug)]
pub struct SuffixMaxIndex {
    dim: usize,
    len: usize,
    root: Level,
}

impl SuffixMaxIndex {
    pub fn build(points: &WeightedPointSet) -> Self {
        let order: Vec<usize> = (0..points.len()).collect();
        let rows: Vec<(&[i64], i64)> = order.iter().map(|&i| (points.point(i), points.weight(i))).collect();
        SuffixMaxIndex { dim: points.dim, len: points.len(), root: Level::build(points.dim, 0, rows) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Maximum weight over points in `Range(r)`; `None` if the range is empty.
    /// Thresholds may be any `i64`, so `i64::MIN` acts as minus infinity.
    pub fn query(&self, r: &[i64]) -> Result<Option<i64>> {
        if r.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: r.len() });
        }
        Ok(self.root.query(r))
    }
}

/// Points stored row-major with `dim` coordinates, plus weights.
#[derive(Clone, Debug)]
struct Block {
    dim: usize,
    coords: Vec<i64>,
    weights: Vec<i64>,
}

impl Block {
    fn from_rows(dim: usize, offset: usize, rows: &[(&[i64], i64)]) -> Self {
        let mut coords = Vec::with_capacity(rows.len() * dim);
        let mut weights = Vec::with_capacity(rows.len());
        for (p, w) in rows {
            coords.extend_from_slice(&p[offset..]);
            weights.push(*w);
        }
        Block { dim, coords, weights }
    }

    fn scan(&self, range: std::ops::Range<usize>, r: &[i64]) -> Option<i64> {
        let mut best = None;
        for i in range {
            let p = &self.coords[i * self.dim..(i + 1) * self.dim];
            if p.iter().zip(r).all(|(x, t)| x >= t) {
                best = best.max(Some(self.weights[i]));
            }
        }
        best
    }
}

#[derive(Clone, Debug)]
enum Level {
    Empty,
    Scan(Block),
    /// One dimension: keys ascending, `best[i]` = max weight of `i..`.
    Line { keys: Vec<i64>, best: Vec<i64> },
    Tree(Box<TreeLevel>),
}

#[derive(Clone, Debug)]
struct TreeLevel {
    /// Points sorted by their first coordinate.
    points: Block,
    keys: Vec<i64>,
    nodes: Vec<Node>,
}

#[derive(Clone, Debug)]
struct Node {
    lo: u32,
    hi: u32,
    left: u32,
    right: u32,
    /// Index over coordinates `1..` of `points[lo..hi]`; leaves scan instead.
    sub: Level,
}

impl Level {
    /// `rows` carry full points; coordinates before `offset` are already
    /// resolved by enclosing levels.
    fn build(dim: usize, offset: usize, mut rows: Vec<(&[i64], i64)>) -> Level {
        if rows.is_empty() {
            return Level::Empty;
        }
        if rows.len() <= LEAF_SIZE {
            return Level::Scan(Block::from_rows(dim, offset, &rows));
        }
        rows.sort_by_key(|(p, _)| p[offset]);
        if dim == 1 {
            let keys: Vec<i64> = rows.iter().map(|(p, _)| p[offset]).collect();
            let mut best: Vec<i64> = rows.iter().map(|&(_, w)| w).collect();
            for i in (0..best.len().saturating_sub(1)).rev() {
                best[i] = best[i].max(best[i + 1]);
            }
            return Level::Line { keys, best };
        }
        let keys = rows.iter().map(|(p, _)| p[offset]).collect();
        let points = Block::from_rows(dim, offset, &rows);
        let mut nodes = Vec::new();
        build_node(&mut nodes, dim, offset, &rows, 0, rows.len());
        Level::Tree(Box::new(TreeLevel { points, keys, nodes }))
    }

    fn query(&self, r: &[i64]) -> Option<i64> {
        match self {
            Level::Empty => None,
            Level::Scan(block) => block.scan(0..block.weights.len(), r),
            Level::Line { keys, best } => {
                let start = keys.partition_point(|&k| k < r[0]);
                best.get(start).copied()
            }
            Level::Tree(tree) => {
                let start = tree.keys.partition_point(|&k| k < r[0]);
                if start == tree.keys.len() {
                    return None;
                }
                tree.visit(0, start, r)
            }
        }
    }
}

fn build_node(nodes: &mut Vec<Node>, dim: usize, offset: usize, rows: &[(&[i64], i64)], lo: usize, hi: usize) -> u32 {
    let id = nodes.len();
    nodes.push(Node { lo: lo as u32, hi: hi as u32, left: NO_CHILD, right: NO_CHILD, sub: Level::Empty });
    if hi - lo > LEAF_SIZE {
        let mid = lo + (hi - lo) / 2;
        let left = build_node(nodes, dim, offset, rows, lo, mid);
        let right = build_node(nodes, dim, offset, rows, mid, hi);
        let sub = Level::build(dim - 1, offset + 1, rows[lo..hi].to_vec());
        let node = &mut nodes[id];
        node.left = left;
        node.right = right;
        node.sub = sub;
    }
    id as u32
}

impl TreeLevel {
    fn visit(&self, id: u32, start: usize, r: &[i64]) -> Option<i64> {
        let node = &self.nodes[id as usize];
        let (lo, hi) = (node.lo as usize, node.hi as usize);
        if hi <= start {
            return None;
        }
        if node.left == NO_CHILD {
            let from = lo.max(start);
            // the first coordinate is already satisfied for from..hi
            return self.points.scan(from..hi, r);
        }
        if lo >= start {
            return node.sub.query(&r[1..]);
        }
        let left = self.visit(node.left, start, r);
        let right = self.visit(node.right, start, r);
        left.max(right)
    }
}

/// Max-min index: answers `max_v min_i (v_i + r_i)` over a static point set.
#[derive(Clone, Debug)]
pub struct MaxMinIndex {
    dim: usize,
    len: usize,
    /// Used when `dim == 1`: the answer is `r_1 + max v_1`.
    top: Option<i64>,
    /// Sub-index `i` holds `(v_j - v_i)_{j != i}` weighted by `v_i`.
    subs: Vec<SuffixMaxIndex>,
}

impl MaxMinIndex {
    pub fn build(dim: usize, points: &[Vec<i64>]) -> Result<Self> {
        let mut flat = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            flat.extend_from_slice(p);
        }
        Self::build_flat(dim, &flat)
    }

    /// Same as [`MaxMinIndex::build`] with points stored row-major.
    pub fn build_flat(dim: usize, coords: &[i64]) -> Result<Self> {
        Self::build_flat_with_cap(dim, coords, DEFAULT_DIM_CAP)
    }

    pub fn build_flat_with_cap(dim: usize, coords: &[i64], cap: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if dim - 1 > cap {
            return Err(Error::DimensionCap { dim, cap: cap + 1 });
        }
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch { expected: dim, got: coords.len() % dim });
        }
        for &c in coords {
            check_finite(c)?;
        }
        let len = coords.len() / dim;
        if dim == 1 {
            return Ok(MaxMinIndex { dim, len, top: coords.iter().copied().max(), subs: Vec::new() });
        }
        let mut subs = Vec::with_capacity(dim);
        let mut diff = vec![0i64; dim - 1];
        for i in 0..dim {
            let mut set = WeightedPointSet::with_cap(dim - 1, cap)?;
            set.coords.reserve(len * (dim - 1));
            set.weights.reserve(len);
            for v in coords.chunks_exact(dim) {
                let mut slot = 0;
                for (j, &x) in v.iter().enumerate() {
                    if j != i {
                        diff[slot] = x - v[i];
                        slot += 1;
                    }
                }
                set.coords.extend_from_slice(&diff);
                set.weights.push(v[i]);
            }
            subs.push(SuffixMaxIndex::build(&set));
        }
        Ok(MaxMinIndex { dim, len, top: None, subs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `max_v min_i (v_i + r_i)`, or `None` for an empty point set.
    pub fn query(&self, r: &[i64]) -> Result<Option<i64>> {
        if r.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: r.len() });
        }
        for &x in r {
            check_finite(x)?;
        }
        if self.dim == 1 {
            return Ok(self.top.map(|t| t + r[0]));
        }
        let mut shifted = vec![0i64; self.dim - 1];
        let mut best = None;
        for (i, sub) in self.subs.iter().enumerate() {
            let mut slot = 0;
            for (j, &rj) in r.iter().enumerate() {
                if j != i {
                    shifted[slot] = r[i] - rj;
                    slot += 1;
                }
            }
            if let Some(w) = sub.root.query(&shifted) {
                best = best.max(Some(r[i] + w));
            }
        }
        Ok(best)
    }
}
