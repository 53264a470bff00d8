//! Connected, simple, positively weighted graphs with their shortest-path
//! metric, and vertex-valued broadcasts over them.
//!
//! Vertices are `0..n` internally and `1..=n` in every file format.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::GraphError;

pub type Vertex = usize;

/// Graphs up to this many vertices keep a dense all-pairs distance matrix.
/// Larger graphs only keep eccentricities and answer distance queries with
/// single-source searches.
pub const DENSE_LIMIT: usize = 2048;

/// Two farthest `(distance, vertex)` targets from a hub.
type FarthestPair = [(u64, Vertex); 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub w: u64,
}

/// Row-major `n × n` shortest-path distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u64>,
}

impl DistanceMatrix {
    #[inline]
    pub fn get(&self, u: Vertex, v: Vertex) -> u64 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: Vertex) -> &[u64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(Vertex, u64)>>,
    dist: Option<DistanceMatrix>,
    ecc: Vec<u64>,
    diam: u64,
    unit: bool,
}

impl WeightedGraph {
    /// Builds a graph on `n` vertices, checking simplicity, weights and
    /// connectivity, and precomputes the metric.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex, u64)>) -> Result<Self, GraphError> {
        let edges: Vec<_> = edges.into_iter().enumerate().map(|(i, (u, v, w))| (i + 1, u, v, w)).collect();
        Self::build(n, edges)
    }

    /// Unit-weight convenience constructor.
    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GraphError> {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, 1)))
    }

    // `line` is only used for error reporting.
    fn build(n: usize, raw: Vec<(usize, Vertex, Vertex, u64)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = HashSet::with_capacity(raw.len());
        let mut edges = Vec::with_capacity(raw.len());
        let mut adj = vec![Vec::new(); n];
        for (line, u, v, w) in raw {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { line, vertex: x as u64 + 1, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, vertex: u + 1 });
            }
            if w < 1 {
                return Err(GraphError::WeightBelowOne { line, weight: w });
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge { line, u: key.0 + 1, v: key.1 + 1 });
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
            edges.push(Edge { u: key.0, v: key.1, w });
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let unit = edges.iter().all(|e| e.w == 1);
        let mut g = WeightedGraph { n, edges, adj, dist: None, ecc: Vec::new(), diam: 0, unit };

        let from_first = g.single_source(0);
        if let Some(v) = from_first.iter().position(|&d| d == u64::MAX) {
            return Err(GraphError::Disconnected { unreachable: v + 1 });
        }

        if n <= DENSE_LIMIT {
            let rows: Vec<Vec<u64>> = (0..n).into_par_iter().map(|s| g.single_source(s)).collect();
            let data: Vec<u64> = rows.into_iter().flatten().collect();
            let matrix = DistanceMatrix { n, data };
            g.ecc = (0..n).map(|v| matrix.row(v).iter().copied().max().unwrap_or(0)).collect();
            g.dist = Some(matrix);
        } else {
            g.ecc = g.sparse_eccentricities();
        }
        g.diam = g.ecc.iter().copied().max().unwrap_or(0);
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, u64)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search_by_key(&v, |&(x, _)| x).is_ok()
    }

    /// True when every edge has weight 1.
    pub fn is_unit_weight(&self) -> bool {
        self.unit
    }

    pub fn ecc(&self, v: Vertex) -> u64 {
        self.ecc[v]
    }

    pub fn eccentricities(&self) -> &[u64] {
        &self.ecc
    }

    pub fn diameter(&self) -> u64 {
        self.diam
    }

    /// The dense distance matrix, present when `n <= DENSE_LIMIT`.
    pub fn distances(&self) -> Option<&DistanceMatrix> {
        self.dist.as_ref()
    }

    /// Shortest-path distance. Panics on graphs above [`DENSE_LIMIT`]; use
    /// [`WeightedGraph::single_source`] there.
    #[inline]
    pub fn dist(&self, u: Vertex, v: Vertex) -> u64 {
        self.dist.as_ref().expect("dense distances are only kept up to DENSE_LIMIT vertices").get(u, v)
    }

    /// Distances from `source` to every vertex; `u64::MAX` marks unreachable
    /// vertices (only possible while the graph is being validated).
    pub fn single_source(&self, source: Vertex) -> Vec<u64> {
        if let Some(m) = &self.dist {
            return m.row(source).to_vec();
        }
        if self.unit {
            self.bfs(source)
        } else {
            self.dijkstra(source)
        }
    }

    fn bfs(&self, source: Vertex) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if dist[v] == u64::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn dijkstra(&self, source: Vertex) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0;
        heap.push(Reverse((0u64, source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }

    /// Exact eccentricities without a dense matrix. Degree-1 vertices are
    /// folded onto their unique neighbour: a pendant `p` hanging from `h` by
    /// weight `w` has `d(p, x) = w + d(h, x)` for every `x != p`, so only the
    /// remaining core vertices need a full search each.
    fn sparse_eccentricities(&self) -> Vec<u64> {
        let n = self.n;
        let pendant = |v: Vertex| self.adj[v].len() == 1 && self.adj[self.adj[v][0].0].len() > 1;
        let core: Vec<Vertex> = (0..n).filter(|&v| !pendant(v)).collect();
        let is_hub: Vec<bool> = {
            let mut h = vec![false; n];
            for v in (0..n).filter(|&v| pendant(v)) {
                h[self.adj[v][0].0] = true;
            }
            h
        };
        // For each core vertex: its eccentricity plus, for hubs, the two
        // farthest targets so a pendant can exclude itself.
        let per_core: Vec<(Vertex, u64, Option<FarthestPair>)> = core
            .par_iter()
            .map(|&c| {
                let d = self.single_source(c);
                let ecc = d.iter().copied().max().unwrap_or(0);
                let top = is_hub[c].then(|| {
                    let mut best = [(0u64, usize::MAX), (0u64, usize::MAX)];
                    for (x, &dx) in d.iter().enumerate() {
                        if x == c {
                            continue;
                        }
                        if dx > best[0].0 || best[0].1 == usize::MAX {
                            best[1] = best[0];
                            best[0] = (dx, x);
                        } else if dx > best[1].0 || best[1].1 == usize::MAX {
                            best[1] = (dx, x);
                        }
                    }
                    best
                });
                (c, ecc, top)
            })
            .collect();
        let mut ecc = vec![0u64; n];
        let mut top_of = vec![None; n];
        for (c, e, top) in per_core {
            ecc[c] = e;
            top_of[c] = top;
        }
        for p in (0..n).filter(|&v| pendant(v)) {
            let (h, w) = self.adj[p][0];
            let top = top_of[h].expect("hub of a pendant vertex is a core vertex");
            let far = if top[0].1 != p { top[0].0 } else { top[1].0 };
            // `far` ignores `h` itself, which sits at distance exactly w.
            ecc[p] = w + far;
        }
        ecc
    }

    /// Line-oriented graph file contents; weights are omitted when 1.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p bcast {} {}", self.n, self.edges.len());
        for e in &self.edges {
            if e.w == 1 {
                let _ = writeln!(out, "e {} {}", e.u + 1, e.v + 1);
            } else {
                let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.w);
            }
        }
        out
    }
}

fn parse_u64(tok: &str, line: usize, what: &str) -> Result<u64, GraphError> {
    tok.parse::<u64>().map_err(|_| GraphError::Malformed { line, reason: format!("{what} {tok:?} is not a nonnegative integer") })
}

/// Parses the `p bcast` graph format.
pub fn parse_graph(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(GraphError::DuplicateHeader { line: lineno });
                }
                if toks.len() != 4 || toks[1] != "bcast" {
                    return Err(GraphError::Malformed { line: lineno, reason: "expected \"p bcast <n> <m>\"".into() });
                }
                let n = parse_u64(toks[2], lineno, "vertex count")? as usize;
                let m = parse_u64(toks[3], lineno, "edge count")? as usize;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or(GraphError::MissingHeader)?;
                if toks.len() != 3 && toks.len() != 4 {
                    return Err(GraphError::Malformed { line: lineno, reason: "expected \"e <u> <v> [<w>]\"".into() });
                }
                let u = parse_u64(toks[1], lineno, "vertex")?;
                let v = parse_u64(toks[2], lineno, "vertex")?;
                for x in [u, v] {
                    if x < 1 || x as usize > n {
                        return Err(GraphError::VertexOutOfRange { line: lineno, vertex: x, n });
                    }
                }
                let w = match toks.get(3) {
                    Some(t) => parse_u64(t, lineno, "weight")?,
                    None => 1,
                };
                raw.push((lineno, u as usize - 1, v as usize - 1, w));
            }
            Some(other) => {
                return Err(GraphError::Malformed { line: lineno, reason: format!("unknown line type {other:?}") });
            }
        }
    }
    let (n, m) = header.ok_or(GraphError::MissingHeader)?;
    if raw.len() != m {
        return Err(GraphError::EdgeCountMismatch { expected: m, found: raw.len() });
    }
    WeightedGraph::build(n, raw)
}

/// A vertex-valued broadcast `f: V -> N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Broadcast {
    values: Vec<u64>,
}

impl Broadcast {
    pub fn zeros(n: usize) -> Self {
        Broadcast { values: vec![0; n] }
    }

    pub fn from_values(values: Vec<u64>) -> Self {
        Broadcast { values }
    }

    /// Broadcast with a single broadcaster.
    pub fn single(n: usize, v: Vertex, value: u64) -> Self {
        let mut b = Self::zeros(n);
        b.values[v] = value;
        b
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> u64 {
        self.values[v]
    }

    pub fn set(&mut self, v: Vertex, value: u64) {
        self.values[v] = value;
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Total value `Σ f(v)`.
    pub fn value(&self) -> u64 {
        self.values.iter().sum()
    }

    /// Broadcasting vertices in increasing order.
    pub fn broadcasters(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.values.iter().enumerate().filter(|(_, &x)| x > 0).map(|(v, _)| v)
    }

    pub fn max_value(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Witness file contents: one `v <vertex> <value>` line per broadcaster
    /// and a closing `value <total>` line.
    pub fn to_witness(&self) -> String {
        let mut out = String::new();
        for v in self.broadcasters() {
            let _ = writeln!(out, "v {} {}", v + 1, self.values[v]);
        }
        let _ = writeln!(out, "value {}", self.value());
        out
    }
}

/// Parses a witness file for a graph on `n` vertices. The closing `value`
/// line is optional but, when present, must match the broadcasters.
pub fn parse_witness(text: &str, n: usize) -> Result<Broadcast, GraphError> {
    let mut f = Broadcast::zeros(n);
    let mut declared = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] | ["c", ..] => {}
            ["v", v, x] => {
                let v = parse_u64(v, lineno, "vertex")?;
                if v < 1 || v as usize > n {
                    return Err(GraphError::UnknownVertex { vertex: v });
                }
                f.values[v as usize - 1] = parse_u64(x, lineno, "value")?;
            }
            ["value", t] => declared = Some(parse_u64(t, lineno, "value")?),
            _ => return Err(GraphError::Malformed { line: lineno, reason: "expected \"v <vertex> <value>\" or \"value <total>\"".into() }),
        }
    }
    if let Some(d) = declared {
        if d != f.value() {
            return Err(GraphError::WitnessTotal { declared: d, actual: f.value() });
        }
    }
    Ok(f)
}

/// `N_f[v]`: every vertex within distance `f(v)` of `v`.
pub fn broadcast_neighborhood(g: &WeightedGraph, f: &Broadcast, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
    check_size(g, f)?;
    if v >= g.n() {
        return Err(GraphError::UnknownVertex { vertex: v as u64 + 1 });
    }
    let r = f.get(v);
    if r == 0 {
        return Err(GraphError::NotBroadcasting { vertex: v + 1 });
    }
    let d = g.single_source(v);
    Ok((0..g.n()).filter(|&u| d[u] <= r).collect())
}

pub(crate) fn check_size(g: &WeightedGraph, f: &Broadcast) -> Result<(), GraphError> {
    if f.len() != g.n() {
        return Err(GraphError::BroadcastSize { expected: g.n(), found: f.len() });
    }
    Ok(())
}
