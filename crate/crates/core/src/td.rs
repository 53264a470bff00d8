//! Tree decompositions: PACE `.td` parsing and writing, validation, and a
//! min-fill elimination heuristic.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::TdError;
use crate::graph::{Vertex, WeightedGraph};

/// Bags are sorted, 0-based vertex lists; tree edges join bag indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    n: usize,
    bags: Vec<Vec<Vertex>>,
    tree: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Builds a decomposition and checks the graph-independent properties:
    /// the bag tree is a tree, every vertex `0..n` is in some bag, and the
    /// bags holding a vertex form a connected subtree.
    pub fn new(n: usize, mut bags: Vec<Vec<Vertex>>, tree: Vec<(usize, usize)>) -> Result<Self, TdError> {
        for bag in &mut bags {
            bag.sort_unstable();
            bag.dedup();
            if let Some(&v) = bag.iter().find(|&&v| v >= n) {
                return Err(TdError::Malformed { line: 0, reason: format!("bag vertex {} outside 1..={n}", v + 1) });
            }
        }
        let td = TreeDecomposition { n, bags, tree };
        td.check_tree()?;
        td.check_vertices()?;
        Ok(td)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one (0 for a decomposition of one vertex).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    fn check_tree(&self) -> Result<(), TdError> {
        let k = self.bags.len();
        if k == 0 {
            return Err(TdError::NotATree { reason: "no bags".into() });
        }
        for &(a, b) in &self.tree {
            if a >= k || b >= k {
                return Err(TdError::NotATree { reason: format!("edge {}-{} references a missing bag", a + 1, b + 1) });
            }
            if a == b {
                return Err(TdError::NotATree { reason: format!("self-loop at bag {}", a + 1) });
            }
        }
        if self.tree.len() != k - 1 {
            return Err(TdError::NotATree { reason: format!("{} bags need {} edges, found {}", k, k - 1, self.tree.len()) });
        }
        let adj = self.adjacency();
        let mut seen = vec![false; k];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        if let Some(x) = seen.iter().position(|&s| !s) {
            return Err(TdError::NotATree { reason: format!("bag {} is not connected to bag 1", x + 1) });
        }
        Ok(())
    }

    fn check_vertices(&self) -> Result<(), TdError> {
        let adj = self.adjacency();
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (x, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                holders[v].push(x);
            }
        }
        let mut mark = vec![usize::MAX; self.bags.len()];
        for (v, hs) in holders.iter().enumerate() {
            let Some(&start) = hs.first() else {
                return Err(TdError::VertexUncovered { vertex: v + 1 });
            };
            // Flood within bags containing v; every holder must be reached.
            let mut reached = 1;
            let mut queue = VecDeque::from([start]);
            mark[start] = v;
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if mark[y] != v && self.bags[y].binary_search(&v).is_ok() {
                        mark[y] = v;
                        reached += 1;
                        queue.push_back(y);
                    }
                }
            }
            if reached != hs.len() {
                return Err(TdError::Disconnected { vertex: v + 1 });
            }
        }
        Ok(())
    }

    /// Checks the decomposition against `g`: vertex count and edge coverage.
    pub fn validate_for(&self, g: &WeightedGraph) -> Result<(), TdError> {
        if self.n != g.n() {
            return Err(TdError::VertexCount { expected: g.n(), found: self.n });
        }
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (x, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                holders[v].push(x);
            }
        }
        for e in g.edges() {
            let covered = holders[e.u].iter().any(|&x| self.bags[x].binary_search(&e.v).is_ok());
            if !covered {
                return Err(TdError::EdgeUncovered { u: e.u + 1, v: e.v + 1 });
            }
        }
        Ok(())
    }

    /// PACE `.td` text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "s td {} {} {}", self.bags.len(), self.width() + 1, self.n);
        for (i, bag) in self.bags.iter().enumerate() {
            let _ = write!(out, "b {}", i + 1);
            for v in bag {
                let _ = write!(out, " {}", v + 1);
            }
            out.push('\n');
        }
        for &(a, b) in &self.tree {
            let _ = writeln!(out, "{} {}", a + 1, b + 1);
        }
        out
    }
}

fn num(tok: &str, line: usize) -> Result<usize, TdError> {
    tok.parse::<usize>().map_err(|_| TdError::Malformed { line, reason: format!("{tok:?} is not a nonnegative integer") })
}

/// Parses PACE `.td` text and validates it against `g`.
pub fn parse_td(text: &str, g: &WeightedGraph) -> Result<TreeDecomposition, TdError> {
    let td = parse_td_unchecked(text)?;
    td.validate_for(g)?;
    Ok(td)
}

/// Parses `.td` text, checking only graph-independent properties.
pub fn parse_td_unchecked(text: &str) -> Result<TreeDecomposition, TdError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut tree = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") => {}
            Some("s") => {
                if header.is_some() {
                    return Err(TdError::Malformed { line: lineno, reason: "duplicate header".into() });
                }
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(TdError::Malformed { line: lineno, reason: "expected \"s td <bags> <width+1> <n>\"".into() });
                }
                let (k, w, n) = (num(toks[2], lineno)?, num(toks[3], lineno)?, num(toks[4], lineno)?);
                bags = vec![None; k];
                header = Some((k, w, n));
            }
            Some("b") => {
                let (k, _, n) = header.ok_or(TdError::MissingHeader)?;
                if toks.len() < 2 {
                    return Err(TdError::Malformed { line: lineno, reason: "bag line without id".into() });
                }
                let id = num(toks[1], lineno)?;
                if id < 1 || id > k {
                    return Err(TdError::Malformed { line: lineno, reason: format!("bag id {id} outside 1..={k}") });
                }
                if bags[id - 1].is_some() {
                    return Err(TdError::Malformed { line: lineno, reason: format!("bag {id} defined twice") });
                }
                let mut bag = Vec::with_capacity(toks.len() - 2);
                for t in &toks[2..] {
                    let v = num(t, lineno)?;
                    if v < 1 || v > n {
                        return Err(TdError::Malformed { line: lineno, reason: format!("vertex {v} outside 1..={n}") });
                    }
                    bag.push(v - 1);
                }
                bags[id - 1] = Some(bag);
            }
            Some(_) => {
                let (k, _, _) = header.ok_or(TdError::MissingHeader)?;
                if toks.len() != 2 {
                    return Err(TdError::Malformed { line: lineno, reason: "expected \"<bag> <bag>\" tree edge".into() });
                }
                let (a, b) = (num(toks[0], lineno)?, num(toks[1], lineno)?);
                if a < 1 || a > k || b < 1 || b > k {
                    return Err(TdError::Malformed { line: lineno, reason: format!("tree edge {a}-{b} outside 1..={k}") });
                }
                tree.push((a - 1, b - 1));
            }
        }
    }
    let (_, declared, n) = header.ok_or(TdError::MissingHeader)?;
    let bags: Vec<Vec<Vertex>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or(TdError::Malformed { line: 0, reason: format!("bag {} never defined", i + 1) }))
        .collect::<Result<_, _>>()?;
    let td = TreeDecomposition::new(n, bags, tree)?;
    let actual = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    if actual != declared {
        return Err(TdError::Malformed { line: 0, reason: format!("header declares largest bag {declared}, found {actual}") });
    }
    Ok(td)
}

/// Decomposition induced by eliminating vertices in `order`: the bag of `v`
/// is `v` plus its not-yet-eliminated neighbours in the fill graph, hung
/// below the bag of the earliest-eliminated of those neighbours.
pub fn from_elimination_order(g: &WeightedGraph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.n();
    assert_eq!(order.len(), n, "elimination order must list every vertex once");
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = (0..n).map(|v| g.neighbors(v).iter().map(|&(u, _)| u).collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<Vertex> = adj[v].iter().copied().collect();
        for (a, &x) in later.iter().enumerate() {
            adj[x].remove(&v);
            for &y in &later[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        if let Some(parent) = later.iter().map(|&u| pos[u]).min() {
            tree.push((i, parent));
        }
        let mut bag = later;
        bag.push(v);
        bags.push(bag);
    }
    TreeDecomposition::new(n, bags, tree).expect("elimination orderings of connected graphs give valid decompositions")
}

/// Min-fill elimination ordering; ties go to the smaller current degree,
/// then the smaller vertex id.
pub fn min_fill_order(g: &WeightedGraph) -> Vec<Vertex> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<Vertex>> = (0..n).map(|v| g.neighbors(v).iter().map(|&(u, _)| u).collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, usize, Vertex)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            let nb: Vec<Vertex> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for (a, &x) in nb.iter().enumerate() {
                fill += nb[a + 1..].iter().filter(|&&y| !adj[x].contains(&y)).count();
            }
            let cand = (fill, nb.len(), v);
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
        let (_, _, v) = best.expect("a live vertex remains");
        let nb: Vec<Vertex> = adj[v].iter().copied().collect();
        for (a, &x) in nb.iter().enumerate() {
            adj[x].remove(&v);
            for &y in &nb[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Min-fill heuristic decomposition. Valid, with no optimality promise.
pub fn heuristic_decompose(g: &WeightedGraph) -> TreeDecomposition {
    from_elimination_order(g, &min_fill_order(g))
}

/// Decomposition from a uniformly random elimination ordering.
pub fn random_decompose<R: Rng + ?Sized>(g: &WeightedGraph, rng: &mut R) -> TreeDecomposition {
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.shuffle(rng);
    from_elimination_order(g, &order)
}
