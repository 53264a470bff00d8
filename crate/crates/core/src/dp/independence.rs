//! Independence signatures: per bag vertex `v`, `s1(v)` is how far the
//! loudest forgotten broadcaster still reaches past `v`, `s2(v)` how loud
//! `v` may broadcast without being heard by one, both clamped to `[0, p]`.

use crate::error::SolveError;
use crate::graph::{Broadcast, DistanceMatrix, Vertex, WeightedGraph};
use crate::nice::NiceTreeDecomposition;

use super::{Scheme, Solution, Table};

#[derive(Clone, Copy, Debug)]
pub struct IndepScheme {
    p: i64,
}

impl IndepScheme {
    pub fn new(p: u64) -> Self {
        IndepScheme { p: p as i64 }
    }
}

impl Scheme for IndepScheme {
    fn slots(&self) -> usize {
        2
    }

    fn introduced(&self, others: &mut dyn Iterator<Item = (&[i64], u64)>, out: &mut [i64]) {
        let (mut s1, mut s2) = (0, self.p);
        for (u, d) in others {
            let d = d as i64;
            s1 = s1.max(u[0] - d);
            s2 = s2.min(u[1].saturating_add(d));
        }
        out[0] = s1;
        out[1] = s2;
    }

    fn broadcast_range(&self, v: &[i64]) -> std::ops::RangeInclusive<i64> {
        // A vertex already heard by someone cannot broadcast.
        let hi = if v[0] == 0 { v[1] } else { 0 };
        1..=hi
    }

    fn after_broadcast(&self, u: &[i64], l: i64, d: u64, out: &mut [i64]) {
        let d = d as i64;
        out[0] = u[0].max(l - d + 1);
        out[1] = u[1].min(d - 1);
    }

    fn join(&self, a: &[i64], b: &[i64], out: &mut [i64]) -> bool {
        if a[0] > b[1] + 1 || b[0] > a[1] + 1 {
            return false;
        }
        out[0] = a[0].max(b[0]);
        out[1] = a[1].min(b[1]);
        true
    }
}

/// `(s1, s2)` over a bag, in bag order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndepSignature {
    pub s1: Vec<u64>,
    pub s2: Vec<u64>,
}

impl IndepSignature {
    pub fn empty(bag_len: usize, p: u64) -> Self {
        IndepSignature { s1: vec![0; bag_len], s2: vec![p; bag_len] }
    }

    pub fn to_key(&self) -> Vec<i64> {
        self.s1.iter().zip(&self.s2).flat_map(|(&a, &b)| [a as i64, b as i64]).collect()
    }

    pub fn from_key(key: &[i64]) -> Self {
        let s1 = key.iter().step_by(2).map(|&x| x as u64).collect();
        let s2 = key.iter().skip(1).step_by(2).map(|&x| x as u64).collect();
        IndepSignature { s1, s2 }
    }
}

/// Signature of the broadcasters of `f` with respect to `bag`.
pub fn signature_on(g: &WeightedGraph, bag: &[Vertex], f: &Broadcast, p: u64) -> IndepSignature {
    let p = p as i64;
    let mut sig = IndepSignature::empty(bag.len(), p as u64);
    for (i, &v) in bag.iter().enumerate() {
        let (mut s1, mut s2) = (0i64, p);
        for u in f.broadcasters() {
            let d = g.dist(u, v) as i64;
            s1 = s1.max(f.get(u) as i64 - d + 1);
            s2 = s2.min(d - 1);
        }
        sig.s1[i] = s1 as u64;
        sig.s2[i] = s2 as u64;
    }
    sig
}

/// Signature of `f` with respect to node `x`; `f` must live on `V_x`.
pub fn signature_of(g: &WeightedGraph, ntd: &NiceTreeDecomposition, x: usize, f: &Broadcast, p: u64) -> Result<IndepSignature, SolveError> {
    if let Some(v) = f.broadcasters().find(|&v| !ntd.forgotten(x).contains(v)) {
        return Err(SolveError::SupportOutsideForgotten { vertex: v + 1 });
    }
    Ok(signature_on(g, &ntd.node(x).bag, f, p))
}

pub fn leaf_table(p: u64) -> Table {
    super::leaf(&IndepScheme::new(p))
}

pub fn introduce_table(child: &Table, v: Vertex, dist: &DistanceMatrix, p: u64) -> Result<Table, SolveError> {
    super::introduce(&IndepScheme::new(p), child, v, dist)
}

pub fn forget_table(child: &Table, v: Vertex, dist: &DistanceMatrix, p: u64) -> Result<Table, SolveError> {
    super::forget(&IndepScheme::new(p), child, v, dist)
}

pub fn join_table(left: &Table, right: &Table, p: u64) -> Result<Table, SolveError> {
    super::join(&IndepScheme::new(p), left, right)
}

/// Maximum value of an independent broadcast with all values at most `p`.
pub fn solve_p_bi(g: &WeightedGraph, ntd: &NiceTreeDecomposition, p: u64) -> Result<Solution, SolveError> {
    super::check_inputs(g, ntd, p)?;
    super::solve_with(&IndepScheme::new(p), g, ntd)
}
