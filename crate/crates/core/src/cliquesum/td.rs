use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Tree decomposition with a private apex set per bag. Bags and apex sets
/// are sorted; bag ids are 0-based in memory and 1-based in files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub n: usize,
    pub bags: Vec<Vec<usize>>,
    pub apices: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Builds a decomposition, sorting bags and checking that the bag graph
    /// is a tree.
    pub fn new(n: usize, mut bags: Vec<Vec<usize>>, mut apices: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if bags.is_empty() {
            return Err(Error::Precondition("a tree decomposition needs at least one bag".into()));
        }
        if apices.len() > bags.len() {
            return Err(Error::Precondition("more apex sets than bags".into()));
        }
        apices.resize(bags.len(), Vec::new());
        for set in bags.iter_mut().chain(apices.iter_mut()) {
            set.sort_unstable();
            set.dedup();
            if let Some(&v) = set.iter().find(|&&v| v >= n) {
                return Err(Error::BadVertex { vertex: v, n });
            }
        }
        if !is_tree(bags.len(), &edges) {
            return Err(Error::Precondition("bag graph is not a tree".into()));
        }
        Ok(TreeDecomposition { n, bags, apices, edges })
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(s, t) in &self.edges {
            adj[s].push(t);
            adj[t].push(s);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// `Σ |β(t)|`.
    pub fn bag_weight(&self) -> usize {
        self.bags.iter().map(Vec::len).sum()
    }

    pub fn max_bag(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn adhesion(&self, s: usize, t: usize) -> Vec<usize> {
        intersect(&self.bags[s], &self.bags[t])
    }

    /// Node with the largest bag, smallest id first on ties.
    pub fn default_root(&self) -> usize {
        let max = self.max_bag();
        self.bags.iter().position(|b| b.len() == max).unwrap_or(0)
    }
}

pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.len() <= big.len() && intersect(small, big).len() == small.len()
}

fn is_tree(nodes: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() + 1 != nodes {
        return false;
    }
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(s, t) in edges {
        if s >= nodes || t >= nodes {
            return false;
        }
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Parses the `.td` format: `s td <bags> <max bag> <n>`, bag lines
/// `b <id> <v...>`, apex lines `a <id> <v...>`, tree edges `<i> <j>`, and
/// `c` comments.
pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut apices: Vec<Vec<usize>> = Vec::new();
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let Some(&first) = tokens.first() else { continue };
        if first == "c" {
            continue;
        }
        if first == "s" {
            if header.is_some() {
                return Err(Error::parse(line, "duplicate header"));
            }
            if tokens.len() != 5 || tokens[1] != "td" {
                return Err(Error::parse(line, "header must read `s td <bags> <max bag> <n>`"));
            }
            let count = number(tokens[2], line)?;
            let n = number(tokens[4], line)?;
            number(tokens[3], line)?;
            if count == 0 {
                return Err(Error::parse(line, "decomposition has no bags"));
            }
            header = Some((count, n));
            bags = vec![None; count];
            apices = vec![Vec::new(); count];
            continue;
        }
        let (count, n) = header.ok_or_else(|| Error::parse(line, "line before `s td` header"))?;
        match first {
            "b" | "a" => {
                let id = tokens.get(1).ok_or_else(|| Error::parse(line, "missing bag id"))?;
                let id = bag_id(id, line, count)?;
                let vertices = tokens[2..].iter().map(|t| vertex(t, line, n)).collect::<Result<Vec<_>>>()?;
                if first == "b" {
                    if bags[id].is_some() {
                        return Err(Error::parse(line, format!("bag {} defined twice", id + 1)));
                    }
                    bags[id] = Some(vertices);
                } else {
                    apices[id].extend(vertices);
                }
            }
            _ => {
                if tokens.len() != 2 {
                    return Err(Error::parse(line, "tree edge lines hold exactly two bag ids"));
                }
                edges.push((bag_id(tokens[0], line, count)?, bag_id(tokens[1], line, count)?));
            }
        }
    }
    let (_, n) = header.ok_or_else(|| Error::parse(0, "missing `s td` header"))?;
    let bags: Vec<Vec<usize>> = bags.into_iter().map(Option::unwrap_or_default).collect();
    let nodes = bags.len();
    if !is_tree(nodes, &edges) {
        return Err(Error::parse(0, "bag graph is not a tree"));
    }
    TreeDecomposition::new(n, bags, apices, edges)
}

fn number(token: &str, line: usize) -> Result<usize> {
    token.parse().map_err(|_| Error::parse(line, format!("bad number `{token}`")))
}

fn bag_id(token: &str, line: usize, count: usize) -> Result<usize> {
    let id = number(token, line)?;
    if id == 0 || id > count {
        return Err(Error::parse(line, format!("bag id {id} out of range 1..={count}")));
    }
    Ok(id - 1)
}

fn vertex(token: &str, line: usize, n: usize) -> Result<usize> {
    let id: i64 = token.parse().map_err(|_| Error::parse(line, format!("bad vertex id `{token}`")))?;
    if id < 1 || id as u64 > n as u64 {
        return Err(Error::VertexOutOfRange { line, vertex: id, n });
    }
    Ok(id as usize - 1)
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    writeln!(out, "s td {} {} {}", td.len(), td.max_bag(), td.n).unwrap();
    let ids = |set: &[usize]| set.iter().map(|v| format!(" {}", v + 1)).collect::<String>();
    for (i, bag) in td.bags.iter().enumerate() {
        writeln!(out, "b {}{}", i + 1, ids(bag)).unwrap();
    }
    for (i, set) in td.apices.iter().enumerate() {
        if !set.is_empty() {
            writeln!(out, "a {}{}", i + 1, ids(set)).unwrap();
        }
    }
    for &(s, t) in &td.edges {
        writeln!(out, "{} {}", s + 1, t + 1).unwrap();
    }
    out
}

/// Per-invariant outcome of [`validate_td`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdReport {
    pub vertex_count: bool,
    pub coverage: bool,
    pub traces_connected: bool,
    pub edges_covered: bool,
    pub apices_in_bags: bool,
    pub apex_sizes: bool,
    pub adhesions: bool,
    /// Adjacent bags where one contains the other. The merge pass removes
    /// these, so they are reported but do not fail validation.
    pub comparable_pairs: usize,
    pub torso_genus: &'static str,
    pub max_adhesion: usize,
    pub failures: Vec<String>,
}

impl TdReport {
    pub fn passed(&self) -> bool {
        self.vertex_count
            && self.coverage
            && self.traces_connected
            && self.edges_covered
            && self.apices_in_bags
            && self.apex_sizes
            && self.adhesions
    }
}

pub fn validate_td(g: &Graph, td: &TreeDecomposition, k: usize) -> TdReport {
    let mut report = TdReport {
        vertex_count: td.n == g.n(),
        coverage: true,
        traces_connected: true,
        edges_covered: true,
        apices_in_bags: true,
        apex_sizes: true,
        adhesions: true,
        comparable_pairs: 0,
        torso_genus: "UNCHECKED",
        max_adhesion: 0,
        failures: Vec::new(),
    };
    if !report.vertex_count {
        report.failures.push(format!("decomposition is over {} vertices, graph has {}", td.n, g.n()));
        return report;
    }
    let n = g.n();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            containing[v].push(t);
        }
    }
    let mut trace_edges = vec![0usize; n];
    for &(s, t) in &td.edges {
        let adhesion = td.adhesion(s, t);
        for &v in &adhesion {
            trace_edges[v] += 1;
        }
        report.max_adhesion = report.max_adhesion.max(adhesion.len());
        if adhesion.len() > k {
            report.adhesions = false;
            report.failures.push(format!("adhesion of tree edge {}-{} has {} > {k} vertices", s + 1, t + 1, adhesion.len()));
        }
        if is_subset(&td.bags[s], &td.bags[t]) || is_subset(&td.bags[t], &td.bags[s]) {
            report.comparable_pairs += 1;
        }
    }
    for v in 0..n {
        if containing[v].is_empty() {
            report.coverage = false;
            report.failures.push(format!("vertex {} is in no bag", v + 1));
        } else if trace_edges[v] + 1 != containing[v].len() {
            report.traces_connected = false;
            report.failures.push(format!("bags containing vertex {} are not connected in the tree", v + 1));
        }
    }
    for (u, v, _) in g.edges() {
        if !containing[u].iter().any(|&t| td.bags[t].binary_search(&v).is_ok()) {
            report.edges_covered = false;
            report.failures.push(format!("edge {}-{} is in no bag", u + 1, v + 1));
        }
    }
    for (t, set) in td.apices.iter().enumerate() {
        if !is_subset(set, &td.bags[t]) {
            report.apices_in_bags = false;
            report.failures.push(format!("apex set of bag {} is not inside the bag", t + 1));
        }
        if set.len() > k {
            report.apex_sizes = false;
            report.failures.push(format!("bag {} has {} > {k} apices", t + 1, set.len()));
        }
    }
    report
}

/// Contracts tree edges between comparable bags, keeping the larger bag and
/// its apex set, until no two adjacent bags are comparable.
pub fn merge_comparable(td: &TreeDecomposition) -> TreeDecomposition {
    let mut alive = vec![true; td.len()];
    let mut edges = td.edges.clone();
    loop {
        let found = edges.iter().position(|&(s, t)| {
            is_subset(&td.bags[s], &td.bags[t]) || is_subset(&td.bags[t], &td.bags[s])
        });
        let Some(pos) = found else { break };
        let (s, t) = edges.swap_remove(pos);
        let (keep, drop) = if td.bags[s].len() >= td.bags[t].len() { (s, t) } else { (t, s) };
        alive[drop] = false;
        for e in edges.iter_mut() {
            if e.0 == drop {
                e.0 = keep;
            }
            if e.1 == drop {
                e.1 = keep;
            }
        }
    }
    let mut new_id = vec![usize::MAX; td.len()];
    let mut bags = Vec::new();
    let mut apices = Vec::new();
    for t in 0..td.len() {
        if alive[t] {
            new_id[t] = bags.len();
            bags.push(td.bags[t].clone());
            apices.push(td.apices[t].clone());
        }
    }
    let edges = edges.into_iter().map(|(s, t)| (new_id[s], new_id[t])).collect();
    TreeDecomposition { n: td.n, bags, apices, edges }
}
