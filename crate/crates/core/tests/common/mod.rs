//! Test-only ground truth that shares no code with the library: Floyd-Warshall
//! distances, plain odometer enumeration and subset-scan independence number.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bcast_core::WeightedGraph;

pub fn floyd(g: &WeightedGraph) -> Vec<Vec<u64>> {
    let n = g.n();
    let inf = u64::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for e in g.edges() {
        d[e.u][e.v] = d[e.u][e.v].min(e.w);
        d[e.v][e.u] = d[e.v][e.u].min(e.w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Best total over all `f: V -> {0..p}` that satisfy the pairwise rule.
pub fn naive_optimum(g: &WeightedGraph, independence: bool, p: u64) -> u64 {
    let d = floyd(g);
    let n = g.n();
    let mut f = vec![0u64; n];
    let mut best = 0;
    loop {
        let ok = (0..n).all(|u| (u + 1..n).all(|v| f[u] == 0 || f[v] == 0 || if independence { d[u][v] > f[u].max(f[v]) } else { d[u][v] > f[u] + f[v] }));
        if ok {
            best = best.max(f.iter().sum());
        }
        let mut i = 0;
        while i < n && f[i] == p {
            f[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        f[i] += 1;
    }
}

pub fn naive_independence_number(g: &WeightedGraph) -> usize {
    let n = g.n();
    (0u32..1 << n).filter(|&s| g.edges().iter().all(|e| s >> e.u & 1 == 0 || s >> e.v & 1 == 0)).map(|s| s.count_ones() as usize).max().unwrap_or(0)
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_bcast")
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin()).current_dir(dir).args(args).output().expect("bcast binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

pub fn path_graph(n: usize) -> WeightedGraph {
    WeightedGraph::unweighted(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
}
