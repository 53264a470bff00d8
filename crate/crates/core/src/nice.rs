//! Nice tree decompositions (leaf / introduce / forget / join nodes, empty
//! root) and the conversion from arbitrary decompositions.
//!
//! Nodes are stored in post-order: every child has a smaller index than its
//! parent and the root is the last node.

use std::collections::VecDeque;

use crate::error::TdError;
use crate::graph::{Vertex, WeightedGraph};
use crate::td::TreeDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted bag.
    pub bag: Vec<Vertex>,
    pub children: Vec<usize>,
}

/// Fixed-size vertex set, one bit per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    fn new(n: usize) -> Self {
        VertexSet { words: vec![0; n.div_ceil(64)] }
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    fn insert(&mut self, v: Vertex) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: Vertex) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b))
    }
}

#[derive(Clone, Debug)]
pub struct NiceTreeDecomposition {
    n: usize,
    width: usize,
    nodes: Vec<NiceNode>,
    /// `V_x`: vertices of the subtree below `x` that are not in `B_x`.
    forgotten: Vec<VertexSet>,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, x: usize) -> &NiceNode {
        &self.nodes[x]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// `V_x`, the vertices already forgotten below `x`.
    pub fn forgotten(&self, x: usize) -> &VertexSet {
        &self.forgotten[x]
    }

    /// Height of every node (leaves are 0).
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.nodes.len()];
        for (x, node) in self.nodes.iter().enumerate() {
            h[x] = node.children.iter().map(|&c| h[c] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Full structural check against `g`: node typing, the decomposition
    /// properties, post-order storage, cached `V_x`, and single forgetting.
    pub fn validate(&self, g: &WeightedGraph) -> Result<(), TdError> {
        let bad = |node: usize, reason: String| TdError::NotNice { node, reason };
        if self.n != g.n() {
            return Err(TdError::VertexCount { expected: g.n(), found: self.n });
        }
        if self.nodes.is_empty() {
            return Err(bad(0, "no nodes".into()));
        }
        let root = self.root();
        if !self.nodes[root].bag.is_empty() {
            return Err(bad(root, "root bag is not empty".into()));
        }
        let mut parent_count = vec![0usize; self.nodes.len()];
        let mut forget_count = vec![0usize; self.n];
        for (x, node) in self.nodes.iter().enumerate() {
            if node.bag.windows(2).any(|w| w[0] >= w[1]) || node.bag.iter().any(|&v| v >= self.n) {
                return Err(bad(x, "bag is not a sorted set of graph vertices".into()));
            }
            for &c in &node.children {
                if c >= x {
                    return Err(bad(x, format!("child {c} is not stored before its parent")));
                }
                parent_count[c] += 1;
            }
            let child_bag = |i: usize| &self.nodes[node.children[i]].bag;
            match node.kind {
                NodeKind::Leaf => {
                    if !node.children.is_empty() || !node.bag.is_empty() {
                        return Err(bad(x, "leaf must have no children and an empty bag".into()));
                    }
                }
                NodeKind::Introduce(v) | NodeKind::Forget(v) => {
                    if node.children.len() != 1 {
                        return Err(bad(x, "introduce/forget needs exactly one child".into()));
                    }
                    let (big, small) = match node.kind {
                        NodeKind::Introduce(_) => (&node.bag, child_bag(0)),
                        _ => (child_bag(0), &node.bag),
                    };
                    let mut expect = small.clone();
                    if small.contains(&v) {
                        return Err(bad(x, format!("vertex {} already in the smaller bag", v + 1)));
                    }
                    expect.push(v);
                    expect.sort_unstable();
                    if &expect != big {
                        return Err(bad(x, format!("bags differ by more than vertex {}", v + 1)));
                    }
                    if let NodeKind::Forget(v) = node.kind {
                        forget_count[v] += 1;
                    }
                }
                NodeKind::Join => {
                    if node.children.len() != 2 || child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                        return Err(bad(x, "join needs two children with identical bags".into()));
                    }
                }
            }
        }
        if let Some(x) = (0..root).find(|&x| parent_count[x] != 1) {
            return Err(bad(x, "every non-root node needs exactly one parent".into()));
        }
        if parent_count[root] != 0 {
            return Err(bad(root, "root has a parent".into()));
        }
        if let Some(v) = (0..self.n).find(|&v| forget_count[v] != 1) {
            return Err(bad(root, format!("vertex {} forgotten {} times", v + 1, forget_count[v])));
        }
        for (x, node) in self.nodes.iter().enumerate() {
            let mut expect = VertexSet::new(self.n);
            for &c in &node.children {
                expect.union_with(&self.forgotten[c]);
                for &v in &self.nodes[c].bag {
                    expect.insert(v);
                }
            }
            for &v in &node.bag {
                expect.remove(v);
            }
            if expect != self.forgotten[x] {
                return Err(bad(x, "cached forgotten set is stale".into()));
            }
        }
        let width = self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(1).saturating_sub(1);
        if width != self.width {
            return Err(bad(root, format!("width {} differs from recorded {}", width, self.width)));
        }
        self.as_tree_decomposition()?.validate_for(g)
    }

    /// The underlying (non-nice) tree decomposition.
    pub fn as_tree_decomposition(&self) -> Result<TreeDecomposition, TdError> {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let tree = self.nodes.iter().enumerate().flat_map(|(x, n)| n.children.iter().map(move |&c| (c, x))).collect();
        TreeDecomposition::new(self.n, bags, tree)
    }
}

struct Builder {
    n: usize,
    nodes: Vec<NiceNode>,
    forgotten: Vec<VertexSet>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<Vertex>, children: Vec<usize>) -> usize {
        let mut below = VertexSet::new(self.n);
        for &c in &children {
            below.union_with(&self.forgotten[c]);
            for &v in &self.nodes[c].bag {
                below.insert(v);
            }
        }
        for &v in &bag {
            below.remove(v);
        }
        self.nodes.push(NiceNode { kind, bag, children });
        self.forgotten.push(below);
        self.nodes.len() - 1
    }

    /// Forgets `from \ to`, then introduces `to \ from`, both in increasing
    /// vertex order, on top of `top`.
    fn transition(&mut self, mut top: usize, to: &[Vertex]) -> usize {
        let from = self.nodes[top].bag.clone();
        let mut bag = from.clone();
        for &v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            bag.retain(|&u| u != v);
            top = self.push(NodeKind::Forget(v), bag.clone(), vec![top]);
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            let at = bag.binary_search(&v).unwrap_err();
            bag.insert(at, v);
            top = self.push(NodeKind::Introduce(v), bag.clone(), vec![top]);
        }
        top
    }
}

/// Converts a valid decomposition into a nice one of the same width, rooted
/// at bag 0. Join bags are materialized per node.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let n = td.vertex_count();
    let adj = td.adjacency();
    let k = td.len();

    // Iterative DFS from bag 0 yielding parents and a post-order.
    let mut parent = vec![usize::MAX; k];
    let mut order = Vec::with_capacity(k);
    let mut stack = vec![(0usize, 0usize)];
    let mut visited = vec![false; k];
    visited[0] = true;
    while let Some(&mut (x, ref mut i)) = stack.last_mut() {
        if *i < adj[x].len() {
            let y = adj[x][*i];
            *i += 1;
            if !visited[y] {
                visited[y] = true;
                parent[y] = x;
                stack.push((y, 0));
            }
        } else {
            order.push(x);
            stack.pop();
        }
    }

    let mut b = Builder { n, nodes: Vec::new(), forgotten: Vec::new() };
    let mut top_of = vec![usize::MAX; k];
    for &x in &order {
        let bag = &td.bags()[x];
        let children: Vec<usize> = adj[x].iter().copied().filter(|&y| parent[y] == x && y != parent[x]).collect();
        let top = if children.is_empty() {
            let leaf = b.push(NodeKind::Leaf, Vec::new(), Vec::new());
            b.transition(leaf, bag)
        } else {
            let mut branches = children.iter().map(|&c| top_of[c]).collect::<Vec<_>>().into_iter();
            let first = branches.next().expect("at least one child");
            let mut acc = b.transition(first, bag);
            for br in branches {
                let right = b.transition(br, bag);
                acc = b.push(NodeKind::Join, bag.clone(), vec![acc, right]);
            }
            acc
        };
        top_of[x] = top;
    }
    let top = b.transition(top_of[0], &[]);
    // A root that is itself a leaf already has the empty bag.
    debug_assert!(b.nodes[top].bag.is_empty());
    NiceTreeDecomposition { n, width: td.width(), nodes: b.nodes, forgotten: b.forgotten }
}

/// True when `B_x` separates `V_x` from the vertices outside `V_x ∪ B_x`.
pub fn bag_separates(g: &WeightedGraph, ntd: &NiceTreeDecomposition, x: usize) -> bool {
    let inside = ntd.forgotten(x);
    let bag = &ntd.node(x).bag;
    let mut seen = vec![false; g.n()];
    let mut queue: VecDeque<Vertex> = inside.iter().collect();
    for v in inside.iter() {
        seen[v] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.neighbors(u) {
            if seen[w] || bag.binary_search(&w).is_ok() {
                continue;
            }
            if !inside.contains(w) {
                return false;
            }
            seen[w] = true;
            queue.push_back(w);
        }
    }
    true
}
