//! Packing signatures: per bag vertex `v`, `s(v)` is the largest
//! `f(u) - d(u,v)` over forgotten broadcasters, floored at `-p-1`.

use crate::error::SolveError;
use crate::graph::{Broadcast, DistanceMatrix, Vertex, WeightedGraph};
use crate::nice::NiceTreeDecomposition;

use super::{Scheme, Solution, Table};

#[derive(Clone, Copy, Debug)]
pub struct PackScheme {
    p: i64,
}

impl PackScheme {
    pub fn new(p: u64) -> Self {
        PackScheme { p: p as i64 }
    }

    fn floor(&self) -> i64 {
        -self.p - 1
    }
}

impl Scheme for PackScheme {
    fn slots(&self) -> usize {
        1
    }

    fn introduced(&self, others: &mut dyn Iterator<Item = (&[i64], u64)>, out: &mut [i64]) {
        out[0] = others.fold(self.floor(), |acc, (u, d)| acc.max(u[0] - d as i64));
    }

    fn broadcast_range(&self, v: &[i64]) -> std::ops::RangeInclusive<i64> {
        1..=self.p.min(-v[0] - 1)
    }

    fn after_broadcast(&self, u: &[i64], l: i64, d: u64, out: &mut [i64]) {
        out[0] = u[0].max(l - d as i64);
    }

    fn join(&self, a: &[i64], b: &[i64], out: &mut [i64]) -> bool {
        if a[0] + b[0] >= 0 {
            return false;
        }
        out[0] = a[0].max(b[0]);
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PackSignature {
    pub s: Vec<i64>,
}

impl PackSignature {
    pub fn empty(bag_len: usize, p: u64) -> Self {
        PackSignature { s: vec![-(p as i64) - 1; bag_len] }
    }

    pub fn to_key(&self) -> Vec<i64> {
        self.s.clone()
    }

    pub fn from_key(key: &[i64]) -> Self {
        PackSignature { s: key.to_vec() }
    }
}

pub fn pack_signature_on(g: &WeightedGraph, bag: &[Vertex], f: &Broadcast, p: u64) -> PackSignature {
    let mut sig = PackSignature::empty(bag.len(), p);
    for (i, &v) in bag.iter().enumerate() {
        for u in f.broadcasters() {
            sig.s[i] = sig.s[i].max(f.get(u) as i64 - g.dist(u, v) as i64);
        }
    }
    sig
}

pub fn pack_signature_of(g: &WeightedGraph, ntd: &NiceTreeDecomposition, x: usize, f: &Broadcast, p: u64) -> Result<PackSignature, SolveError> {
    if let Some(v) = f.broadcasters().find(|&v| !ntd.forgotten(x).contains(v)) {
        return Err(SolveError::SupportOutsideForgotten { vertex: v + 1 });
    }
    Ok(pack_signature_on(g, &ntd.node(x).bag, f, p))
}

pub fn pack_leaf(p: u64) -> Table {
    super::leaf(&PackScheme::new(p))
}

pub fn pack_introduce(child: &Table, v: Vertex, dist: &DistanceMatrix, p: u64) -> Result<Table, SolveError> {
    super::introduce(&PackScheme::new(p), child, v, dist)
}

pub fn pack_forget(child: &Table, v: Vertex, dist: &DistanceMatrix, p: u64) -> Result<Table, SolveError> {
    super::forget(&PackScheme::new(p), child, v, dist)
}

pub fn pack_join(left: &Table, right: &Table, p: u64) -> Result<Table, SolveError> {
    super::join(&PackScheme::new(p), left, right)
}

/// Maximum value of a broadcast packing with all values at most `p`.
pub fn solve_p_bp(g: &WeightedGraph, ntd: &NiceTreeDecomposition, p: u64) -> Result<Solution, SolveError> {
    super::check_inputs(g, ntd, p)?;
    super::solve_with(&PackScheme::new(p), g, ntd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::nice::make_nice;
    use crate::td::heuristic_decompose;

    #[test]
    fn signature_examples() {
        let g = parse_graph("p bcast 3 2\ne 1 2\ne 2 3\n").unwrap();
        let f = Broadcast::from_values(vec![1, 0, 0]);
        assert_eq!(pack_signature_on(&g, &[2], &f, 2).s, vec![-1]);
        assert_eq!(pack_signature_on(&g, &[1], &f, 2).s, vec![0]);
        assert_eq!(pack_signature_on(&g, &[0, 1], &Broadcast::zeros(3), 1).s, vec![-2, -2]);
    }

    #[test]
    fn recurrence_boundaries() {
        let sch = PackScheme::new(2);
        assert_eq!(sch.broadcast_range(&[-3]), 1..=2);
        assert!(sch.broadcast_range(&[-1]).is_empty());
        let mut out = [0];
        assert!(!sch.join(&[0], &[0], &mut out));
        assert!(!sch.join(&[-1], &[1], &mut out));
        assert!(sch.join(&[-1], &[0], &mut out));
        assert_eq!(out, [0]);
        assert!(sch.join(&[-1], &[-2], &mut out));
        assert_eq!(out, [-1]);
        let g = parse_graph("p bcast 2 1\ne 1 2\n").unwrap();
        let t = pack_introduce(&pack_leaf(1), 0, g.distances().unwrap(), 1).unwrap();
        assert_eq!(t.get(&[-2]), Some(0));
        let f = pack_forget(&t, 0, g.distances().unwrap(), 1).unwrap();
        assert_eq!(f.get(&[]), Some(1));
    }

    fn solve(text: &str, p: u64) -> u64 {
        let g = parse_graph(text).unwrap();
        let nice = make_nice(&heuristic_decompose(&g));
        let s = solve_p_bp(&g, &nice, p).unwrap();
        assert!(crate::validate::is_broadcast_packing(&g, &s.witness, true).unwrap());
        assert_eq!(s.witness.value(), s.value);
        s.value
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve("p bcast 4 3\ne 1 2\ne 2 3\ne 3 4\n", 3), 3);
        assert_eq!(solve("p bcast 4 3\ne 1 2\ne 1 3\ne 1 4\n", 2), 2);
        assert_eq!(solve("p bcast 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n", 2), 2);
    }
}
