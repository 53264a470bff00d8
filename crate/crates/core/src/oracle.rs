//! Brute-force ground truth: exhaustive search over `f: V -> {0..p}`,
//! small-graph enumeration and a bitmask maximum independent set.

use rand::Rng;
use rayon::prelude::*;

use crate::dp::Solution;
use crate::error::OracleError;
use crate::graph::{Broadcast, Vertex, WeightedGraph};
use crate::validate::Problem;

pub const UNWEIGHTED_CAP: usize = 8;
pub const WEIGHTED_CAP: usize = 7;

fn default_cap(g: &WeightedGraph) -> usize {
    if g.is_unit_weight() {
        UNWEIGHTED_CAP
    } else {
        WEIGHTED_CAP
    }
}

fn check(g: &WeightedGraph, p: u64, cap: usize) -> Result<(), OracleError> {
    if g.n() > cap {
        return Err(OracleError::AboveCap { n: g.n(), cap });
    }
    if p > g.diameter() {
        return Err(OracleError::POutOfRange { p, diam: g.diameter() });
    }
    Ok(())
}

struct Search<'a> {
    g: &'a WeightedGraph,
    problem: Problem,
    p: u64,
    prune: bool,
    f: Vec<u64>,
    best: u64,
    best_f: Vec<u64>,
}

impl Search<'_> {
    fn fits(&self, v: Vertex, val: u64) -> bool {
        (0..v).all(|u| self.f[u] == 0 || self.problem.compatible(self.g.dist(u, v), self.f[u], val))
    }

    fn run(&mut self, v: Vertex, total: u64) {
        let n = self.g.n();
        if v == n {
            let ok = self.prune || self.complete_ok();
            if ok && (total > self.best || self.best_f.is_empty()) {
                self.best = total;
                self.best_f = self.f.clone();
            }
            return;
        }
        if self.prune && !self.best_f.is_empty() && total + self.p * (n - v) as u64 <= self.best {
            return;
        }
        for val in 0..=self.p {
            if self.prune && val > 0 && !self.fits(v, val) {
                continue;
            }
            self.f[v] = val;
            self.run(v + 1, total + val);
        }
        self.f[v] = 0;
    }

    fn complete_ok(&self) -> bool {
        (0..self.g.n()).all(|v| self.f[v] == 0 || self.fits(v, self.f[v]))
    }
}

/// Exact optimum over `p`-broadcasts (diameter-capped), pruned, with the
/// default size cap. The witness is the lexicographically smallest optimum.
pub fn brute_force_optimum(g: &WeightedGraph, problem: Problem, p: u64) -> Result<Solution, OracleError> {
    brute_force_with_cap(g, problem, p, default_cap(g))
}

pub fn brute_force_with_cap(g: &WeightedGraph, problem: Problem, p: u64, cap: usize) -> Result<Solution, OracleError> {
    check(g, p, cap)?;
    Ok(search(g, problem, p, true))
}

/// Plain enumeration of all `(p+1)^n` assignments, filtered afterwards.
pub fn brute_force_unpruned(g: &WeightedGraph, problem: Problem, p: u64) -> Result<Solution, OracleError> {
    check(g, p, default_cap(g))?;
    Ok(search(g, problem, p, false))
}

fn search(g: &WeightedGraph, problem: Problem, p: u64, prune: bool) -> Solution {
    // Branch on the value of the first vertex in parallel; earlier branches
    // win ties, which keeps the lexicographically smallest optimum.
    let branches: Vec<(u64, Vec<u64>)> = (0..=p)
        .into_par_iter()
        .map(|val| {
            let mut s = Search { g, problem, p, prune, f: vec![0; g.n()], best: 0, best_f: Vec::new() };
            s.f[0] = val;
            s.run(1, val);
            (s.best, s.best_f)
        })
        .collect();
    let mut best = (0, Vec::new());
    for (v, f) in branches {
        if !f.is_empty() && (best.1.is_empty() || v > best.0) {
            best = (v, f);
        }
    }
    Solution { value: best.0, witness: Broadcast::from_values(best.1) }
}

/// Every valid `p`-broadcast of `problem` supported inside `support`.
pub fn all_valid_broadcasts(g: &WeightedGraph, support: &[Vertex], problem: Problem, p: u64) -> Vec<Broadcast> {
    fn go(g: &WeightedGraph, support: &[Vertex], problem: Problem, p: u64, i: usize, f: &mut Vec<u64>, out: &mut Vec<Broadcast>) {
        if i == support.len() {
            out.push(Broadcast::from_values(f.clone()));
            return;
        }
        let v = support[i];
        for val in 0..=p {
            let ok = val == 0 || support[..i].iter().all(|&u| f[u] == 0 || problem.compatible(g.dist(u, v), f[u], val));
            if ok {
                f[v] = val;
                go(g, support, problem, p, i + 1, f, out);
            }
        }
        f[v] = 0;
    }
    let mut out = Vec::new();
    go(g, support, problem, p, 0, &mut vec![0; g.n()], &mut out);
    out
}

/// All connected labeled graphs on `n` vertices, in edge-bitmask order.
pub fn enumerate_small_graphs(n: usize) -> Result<Vec<WeightedGraph>, OracleError> {
    if !(1..=6).contains(&n) {
        return Err(OracleError::EnumerationRange(n));
    }
    let pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let out = (0u32..1 << pairs.len())
        .into_par_iter()
        .filter_map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            WeightedGraph::unweighted(n, edges).ok()
        })
        .collect();
    Ok(out)
}

/// Random connected graph: a random tree plus each other pair with
/// probability `density`, weights uniform in `weights`.
#[allow(clippy::needless_range_loop)]
pub fn random_connected_graph<R: Rng + ?Sized>(n: usize, density: f64, weights: std::ops::RangeInclusive<u64>, rng: &mut R) -> WeightedGraph {
    let mut adj = vec![vec![false; n]; n];
    for v in 1..n {
        let u = rng.gen_range(0..v);
        adj[u][v] = true;
    }
    for u in 0..n {
        for v in u + 1..n {
            if !adj[u][v] && rng.gen_bool(density) {
                adj[u][v] = true;
            }
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if adj[u][v] {
                edges.push((u, v, rng.gen_range(weights.clone())));
            }
        }
    }
    WeightedGraph::new(n, edges).expect("tree plus extra edges is connected")
}

/// Independence number by bitmask branching (n at most 64).
pub fn maximum_independent_set(g: &WeightedGraph) -> usize {
    assert!(g.n() <= 64, "bitmask MIS supports at most 64 vertices");
    let nb: Vec<u64> = (0..g.n()).map(|v| g.neighbors(v).iter().fold(0, |m, &(u, _)| m | 1 << u)).collect();
    fn mis(nb: &[u64], mask: u64) -> usize {
        if mask == 0 {
            return 0;
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        if nb[v] & mask == 0 {
            return 1 + mis(nb, rest);
        }
        mis(nb, rest).max(1 + mis(nb, rest & !nb[v]))
    }
    let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    mis(&nb, full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn p4() -> WeightedGraph {
        parse_graph("p bcast 4 3\ne 1 2\ne 2 3\ne 3 4\n").unwrap()
    }

    #[test]
    fn examples() {
        let g = p4();
        let bi = brute_force_optimum(&g, Problem::Independence, 3).unwrap();
        assert_eq!(bi.value, 4);
        assert_eq!(brute_force_unpruned(&g, Problem::Independence, 3).unwrap(), bi);
        assert_eq!(brute_force_optimum(&g, Problem::Packing, 3).unwrap().value, 3);
        assert_eq!(brute_force_unpruned(&g, Problem::Packing, 3).unwrap().value, 3);
        let c4 = parse_graph("p bcast 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n").unwrap();
        assert_eq!(brute_force_optimum(&c4, Problem::Independence, 2).unwrap().value, 2);
    }

    #[test]
    fn lexicographically_smallest_witness() {
        let g = parse_graph("p bcast 2 1\ne 1 2\n").unwrap();
        let s = brute_force_optimum(&g, Problem::Independence, 1).unwrap();
        assert_eq!(s.witness.values(), &[0, 1]);
    }

    #[test]
    fn caps() {
        let g = WeightedGraph::unweighted(9, (0..8).map(|i| (i, i + 1))).unwrap();
        assert_eq!(brute_force_optimum(&g, Problem::Packing, 1), Err(OracleError::AboveCap { n: 9, cap: 8 }));
        let w = WeightedGraph::new(8, (0..7).map(|i| (i, i + 1, 2))).unwrap();
        assert!(brute_force_optimum(&w, Problem::Packing, 1).is_err());
        assert!(brute_force_optimum(&p4(), Problem::Packing, 4).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_small_graphs(1).unwrap().len(), 1);
        assert_eq!(enumerate_small_graphs(2).unwrap().len(), 1);
        assert_eq!(enumerate_small_graphs(3).unwrap().len(), 4);
        assert_eq!(enumerate_small_graphs(4).unwrap().len(), 38);
        assert!(enumerate_small_graphs(7).is_err());
        assert!(enumerate_small_graphs(0).is_err());
    }

    #[test]
    fn mis_small_cases() {
        assert_eq!(maximum_independent_set(&p4()), 2);
        let k13 = parse_graph("p bcast 4 3\ne 1 2\ne 1 3\ne 1 4\n").unwrap();
        assert_eq!(maximum_independent_set(&k13), 3);
        let k4 = WeightedGraph::unweighted(4, (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v)))).unwrap();
        assert_eq!(maximum_independent_set(&k4), 1);
    }

    #[test]
    fn pruned_matches_unpruned_on_all_graphs_up_to_four() {
        for n in 1..=4 {
            for g in enumerate_small_graphs(n).unwrap() {
                for p in 0..=g.diameter() {
                    for problem in [Problem::Independence, Problem::Packing] {
                        let a = brute_force_optimum(&g, problem, p).unwrap();
                        let b = brute_force_unpruned(&g, problem, p).unwrap();
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }
}
