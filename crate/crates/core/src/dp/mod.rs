//! Sparse signature tables over nice tree decompositions.
//!
//! Both problems share one engine; they differ only in the per-vertex slot
//! layout of a signature and in the four update rules, captured by
//! [`Scheme`]. A signature is a flat `[i64]` key, `slots()` entries per bag
//! vertex, bag sorted by vertex id. Absent keys stand for minus infinity.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::SolveError;
use crate::graph::{Broadcast, DistanceMatrix, Vertex, WeightedGraph};
use crate::nice::{NiceTreeDecomposition, NodeKind};

pub mod independence;
pub mod packing;

pub use independence::{solve_p_bi, IndepScheme, IndepSignature};
pub use packing::{solve_p_bp, PackScheme, PackSignature};

/// Signature semantics for one problem at a fixed `p`.
pub trait Scheme: Sync {
    /// Entries per bag vertex.
    fn slots(&self) -> usize;

    /// Slots of a vertex `v` introduced next to bag vertices whose slots are
    /// `others[i]` at distance `dists[i]` from `v`.
    fn introduced(&self, others: &mut dyn Iterator<Item = (&[i64], u64)>, out: &mut [i64]);

    /// Values `v` may take when it is forgotten with slots `v_slots`.
    fn broadcast_range(&self, v_slots: &[i64]) -> std::ops::RangeInclusive<i64>;

    /// Slots of a bag vertex at distance `d` from a new broadcaster of value `l`.
    fn after_broadcast(&self, u_slots: &[i64], l: i64, d: u64, out: &mut [i64]);

    /// Combines one vertex of two join children; false when incompatible.
    fn join(&self, a: &[i64], b: &[i64], out: &mut [i64]) -> bool;
}

/// How an entry was obtained, by index into the child tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Back {
    Leaf,
    Introduce(u32),
    /// `l = 0` is the branch where the forgotten vertex stays silent.
    Forget {
        child: u32,
        l: u64,
    },
    Join(u32, u32),
}

/// A finished table, entries sorted by key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    bag: Vec<Vertex>,
    width: usize,
    keys: Vec<i64>,
    values: Vec<u64>,
    backs: Vec<Back>,
}

impl Table {
    pub fn bag(&self) -> &[Vertex] {
        &self.bag
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn key(&self, i: usize) -> &[i64] {
        &self.keys[i * self.width..(i + 1) * self.width]
    }

    pub fn value(&self, i: usize) -> u64 {
        self.values[i]
    }

    pub fn back(&self, i: usize) -> Back {
        self.backs[i]
    }

    /// `val_x(key)`, `None` for minus infinity.
    pub fn get(&self, key: &[i64]) -> Option<u64> {
        self.position(key).map(|i| self.values[i])
    }

    pub fn position(&self, key: &[i64]) -> Option<usize> {
        if key.len() != self.width {
            return None;
        }
        if self.width == 0 {
            return if self.values.is_empty() { None } else { Some(0) };
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.key(mid).cmp(key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i64], u64)> + '_ {
        (0..self.len()).map(move |i| (self.key(i), self.values[i]))
    }

    pub fn max_value(&self) -> Option<u64> {
        self.values.iter().copied().max()
    }
}

/// Table under construction. The first candidate offered for a key wins
/// ties, so callers offer in (child key, l) order.
struct Builder {
    bag: Vec<Vertex>,
    width: usize,
    map: HashMap<Box<[i64]>, (u64, Back)>,
}

impl Builder {
    fn new(bag: Vec<Vertex>, slots: usize) -> Self {
        let width = bag.len() * slots;
        Builder { bag, width, map: HashMap::new() }
    }

    fn offer(&mut self, key: &[i64], value: u64, back: Back) {
        match self.map.get_mut(key) {
            Some(slot) => {
                if value > slot.0 {
                    *slot = (value, back);
                }
            }
            None => {
                self.map.insert(key.into(), (value, back));
            }
        }
    }

    fn finish(self) -> Table {
        let mut entries: Vec<_> = self.map.into_iter().collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut keys = Vec::with_capacity(entries.len() * self.width);
        let mut values = Vec::with_capacity(entries.len());
        let mut backs = Vec::with_capacity(entries.len());
        for (k, (v, b)) in entries {
            keys.extend_from_slice(&k);
            values.push(v);
            backs.push(b);
        }
        Table { bag: self.bag, width: self.width, keys, values, backs }
    }
}

fn mismatch(node: &'static str, reason: String) -> SolveError {
    SolveError::BagMismatch { node, reason }
}

/// Table of a leaf: the empty broadcast with value 0.
pub fn leaf<S: Scheme>(scheme: &S) -> Table {
    let mut b = Builder::new(Vec::new(), scheme.slots());
    b.offer(&[], 0, Back::Leaf);
    b.finish()
}

/// Introduces `v` above `child`.
pub fn introduce<S: Scheme>(scheme: &S, child: &Table, v: Vertex, dist: &DistanceMatrix) -> Result<Table, SolveError> {
    let pos = match child.bag.binary_search(&v) {
        Ok(_) => return Err(mismatch("introduce", format!("vertex {} already in the child bag", v + 1))),
        Err(p) => p,
    };
    let s = scheme.slots();
    let mut bag = child.bag.clone();
    bag.insert(pos, v);
    let row = dist.row(v);
    let mut b = Builder::new(bag, s);
    let mut key = vec![0i64; child.width + s];
    for i in 0..child.len() {
        let ck = child.key(i);
        key[..pos * s].copy_from_slice(&ck[..pos * s]);
        key[(pos + 1) * s..].copy_from_slice(&ck[pos * s..]);
        let mut others = child.bag.iter().enumerate().map(|(j, &u)| (&ck[j * s..(j + 1) * s], row[u]));
        scheme.introduced(&mut others, &mut key[pos * s..(pos + 1) * s]);
        b.offer(&key, child.values[i], Back::Introduce(i as u32));
    }
    Ok(b.finish())
}

/// Forgets `v` from `child`: either `v` stays silent or it broadcasts.
pub fn forget<S: Scheme>(scheme: &S, child: &Table, v: Vertex, dist: &DistanceMatrix) -> Result<Table, SolveError> {
    let pos = child.bag.binary_search(&v).map_err(|_| mismatch("forget", format!("vertex {} not in the child bag", v + 1)))?;
    let s = scheme.slots();
    let mut bag = child.bag.clone();
    bag.remove(pos);
    let row = dist.row(v);
    let mut b = Builder::new(bag, s);
    let mut key = vec![0i64; child.width - s];
    for i in 0..child.len() {
        let ck = child.key(i);
        key[..pos * s].copy_from_slice(&ck[..pos * s]);
        key[pos * s..].copy_from_slice(&ck[(pos + 1) * s..]);
        b.offer(&key, child.values[i], Back::Forget { child: i as u32, l: 0 });
        for l in scheme.broadcast_range(&ck[pos * s..(pos + 1) * s]) {
            for (j, &u) in b.bag.iter().enumerate() {
                let src = if j < pos { j } else { j + 1 };
                scheme.after_broadcast(&ck[src * s..(src + 1) * s], l, row[u], &mut key[j * s..(j + 1) * s]);
            }
            b.offer(&key, child.values[i] + l as u64, Back::Forget { child: i as u32, l: l as u64 });
        }
    }
    Ok(b.finish())
}

/// Combines two children with identical bags.
pub fn join<S: Scheme>(scheme: &S, left: &Table, right: &Table) -> Result<Table, SolveError> {
    if left.bag != right.bag {
        return Err(mismatch("join", "children have different bags".into()));
    }
    let s = scheme.slots();
    let mut b = Builder::new(left.bag.clone(), s);
    let mut key = vec![0i64; left.width];
    for i in 0..left.len() {
        let lk = left.key(i);
        'pair: for j in 0..right.len() {
            let rk = right.key(j);
            for t in 0..left.bag.len() {
                let r = t * s..(t + 1) * s;
                if !scheme.join(&lk[r.clone()], &rk[r.clone()], &mut key[r]) {
                    continue 'pair;
                }
            }
            b.offer(&key, left.values[i] + right.values[j], Back::Join(i as u32, j as u32));
        }
    }
    Ok(b.finish())
}

/// Optimum and one optimal broadcast.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub value: u64,
    pub witness: Broadcast,
}

/// Checks `g`, `ntd` and `p` before a solve.
pub(crate) fn check_inputs(g: &WeightedGraph, ntd: &NiceTreeDecomposition, p: u64) -> Result<(), SolveError> {
    if p > g.diameter() {
        return Err(SolveError::POutOfRange { p, diam: g.diameter() });
    }
    if g.distances().is_none() {
        return Err(SolveError::NoDenseMetric { n: g.n() });
    }
    ntd.validate(g)?;
    Ok(())
}

/// Every node's table, bottom-up. Nodes of equal height are independent
/// and are evaluated in parallel on the current rayon pool.
pub fn all_tables<S: Scheme>(scheme: &S, g: &WeightedGraph, ntd: &NiceTreeDecomposition) -> Result<Vec<Table>, SolveError> {
    let dist = g.distances().ok_or(SolveError::NoDenseMetric { n: g.n() })?;
    let heights = ntd.heights();
    let top = heights.iter().copied().max().unwrap_or(0);
    let mut layers = vec![Vec::new(); top + 1];
    for (x, &h) in heights.iter().enumerate() {
        layers[h].push(x);
    }
    let mut tables: Vec<Option<Table>> = vec![None; ntd.len()];
    for layer in layers {
        let done: Vec<(usize, Result<Table, SolveError>)> = layer
            .par_iter()
            .map(|&x| {
                let node = ntd.node(x);
                let child = |i: usize| tables[node.children[i]].as_ref().expect("child evaluated first");
                let t = match node.kind {
                    NodeKind::Leaf => Ok(leaf(scheme)),
                    NodeKind::Introduce(v) => introduce(scheme, child(0), v, dist),
                    NodeKind::Forget(v) => forget(scheme, child(0), v, dist),
                    NodeKind::Join => join(scheme, child(0), child(1)),
                };
                (x, t)
            })
            .collect();
        for (x, t) in done {
            tables[x] = Some(t?);
        }
    }
    Ok(tables.into_iter().map(|t| t.expect("every node evaluated")).collect())
}

/// Runs the DP and follows back-pointers from the root.
pub fn solve_with<S: Scheme>(scheme: &S, g: &WeightedGraph, ntd: &NiceTreeDecomposition) -> Result<Solution, SolveError> {
    let tables = all_tables(scheme, g, ntd)?;
    let root = ntd.root();
    if tables[root].len() != 1 {
        return Err(SolveError::Internal(format!("root table has {} entries", tables[root].len())));
    }
    let value = tables[root].value(0);
    let mut witness = Broadcast::zeros(g.n());
    let mut stack = vec![(root, 0usize)];
    while let Some((x, i)) = stack.pop() {
        let node = ntd.node(x);
        match tables[x].back(i) {
            Back::Leaf => {}
            Back::Introduce(c) => stack.push((node.children[0], c as usize)),
            Back::Forget { child, l } => {
                if let NodeKind::Forget(v) = node.kind {
                    witness.set(v, l);
                }
                stack.push((node.children[0], child as usize));
            }
            Back::Join(a, b) => {
                stack.push((node.children[0], a as usize));
                stack.push((node.children[1], b as usize));
            }
        }
    }
    if witness.value() != value {
        return Err(SolveError::Internal(format!("witness value {} differs from optimum {}", witness.value(), value)));
    }
    Ok(Solution { value, witness })
}
