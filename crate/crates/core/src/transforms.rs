//! Diameter win/win, truncation of broadcasts to `p`-broadcasts, and the
//! approximation wrapper built on the exact `p`-solver.

use std::str::FromStr;

use crate::dp::{solve_p_bi, solve_p_bp, Solution};
use crate::error::{SolveError, TransformError};
use crate::graph::{check_size, Broadcast, Vertex, WeightedGraph};
use crate::nice::NiceTreeDecomposition;
use crate::validate::{find_violation, Problem};

/// Approximation parameter `epsilon = num/den` in `(0, 1/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApproxConfig {
    num: u64,
    den: u64,
    p: u64,
}

impl ApproxConfig {
    pub fn new(num: u64, den: u64) -> Result<Self, SolveError> {
        if num == 0 || den == 0 || num.checked_mul(2).is_none_or(|t| t >= den) {
            return Err(SolveError::EpsilonOutOfRange { num, den });
        }
        Ok(ApproxConfig { num, den, p: den / (2 * num) })
    }

    pub fn epsilon(&self) -> (u64, u64) {
        (self.num, self.den)
    }

    /// `floor(1 / (2 epsilon))`, at least 1.
    pub fn p(&self) -> u64 {
        self.p
    }
}

impl FromStr for ApproxConfig {
    type Err = String;

    /// Accepts `a/b` or a decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("cannot read epsilon {s:?}; use a/b or a decimal");
        let (num, den) = if let Some((a, b)) = s.split_once('/') {
            (a.trim().parse::<u64>().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?)
        } else {
            let (int, frac) = s.split_once('.').unwrap_or((s, ""));
            if frac.len() > 18 || !frac.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10u64.pow(frac.len() as u32);
            let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            (int.checked_mul(den).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?, den)
        };
        ApproxConfig::new(num, den).map_err(|e| e.to_string())
    }
}

/// The smallest-id vertex realizing the diameter.
pub fn canonical_vertex(g: &WeightedGraph) -> Vertex {
    (0..g.n()).find(|&v| g.ecc(v) == g.diameter()).expect("some vertex has maximum eccentricity")
}

/// `f(v) = diam` on [`canonical_vertex`], zero elsewhere. Valid for both problems.
pub fn canonical_single_broadcast(g: &WeightedGraph) -> Broadcast {
    Broadcast::single(g.n(), canonical_vertex(g), g.diameter())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub yes: bool,
    /// Set when the answer came from `diam > k` without running the DP.
    pub by_diameter: bool,
    /// Exact optimum, when the DP ran.
    pub optimum: Option<u64>,
    /// A broadcast of value at least `k` on a yes answer.
    pub witness: Option<Broadcast>,
}

pub fn solve_exact(g: &WeightedGraph, ntd: &NiceTreeDecomposition, problem: Problem, p: u64) -> Result<Solution, SolveError> {
    match problem {
        Problem::Independence => solve_p_bi(g, ntd, p),
        Problem::Packing => solve_p_bp(g, ntd, p),
    }
}

/// Is there a valid broadcast of value at least `k`?
pub fn decide_value_k(g: &WeightedGraph, ntd: &NiceTreeDecomposition, k: u64, problem: Problem) -> Result<Decision, SolveError> {
    if k == 0 {
        return Err(SolveError::KOutOfRange);
    }
    if g.diameter() > k {
        let witness = Broadcast::single(g.n(), canonical_vertex(g), k);
        return Ok(Decision { yes: true, by_diameter: true, optimum: None, witness: Some(witness) });
    }
    let sol = solve_exact(g, ntd, problem, g.diameter())?;
    let yes = sol.value >= k;
    Ok(Decision { yes, by_diameter: false, optimum: Some(sol.value), witness: yes.then_some(sol.witness) })
}

/// `p`-solution with the `p` used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximation {
    pub p: u64,
    pub value: u64,
    pub witness: Broadcast,
}

/// Optimal independent `p`-broadcast with `p = floor(1/(2 epsilon))`,
/// lowered to the diameter when larger (the result is then exact).
pub fn approx_bi(g: &WeightedGraph, ntd: &NiceTreeDecomposition, cfg: ApproxConfig) -> Result<Approximation, SolveError> {
    let p = cfg.p().min(g.diameter());
    let sol = solve_p_bi(g, ntd, p)?;
    Ok(Approximation { p, value: sol.value, witness: sol.witness })
}

/// A lone broadcaster louder than its eccentricity moves to the canonical
/// vertex, so the shortest paths below always exist.
fn normalize_single(g: &WeightedGraph, f: &Broadcast) -> Broadcast {
    let xs: Vec<Vertex> = f.broadcasters().collect();
    if let [v] = xs[..] {
        if f.get(v) > g.ecc(v) {
            return Broadcast::single(g.n(), canonical_vertex(g), f.get(v));
        }
    }
    f.clone()
}

/// Vertices of a shortest path `v = u_0, ..., u_len`: the endpoint is the
/// smallest-id vertex at distance `len`, each step back takes the
/// smallest-id neighbor one closer to `v`.
fn shortest_path(g: &WeightedGraph, v: Vertex, len: u64) -> Result<Vec<Vertex>, TransformError> {
    if !g.is_unit_weight() {
        return Err(TransformError::WeightedGraph);
    }
    let d = g.single_source(v);
    let end = (0..g.n()).find(|&u| d[u] == len).ok_or_else(|| TransformError::Assertion(format!("no vertex at distance {} from vertex {}", len, v + 1)))?;
    let mut path = vec![end];
    let mut cur = end;
    while cur != v {
        cur = g.neighbors(cur).iter().map(|&(w, _)| w).filter(|&w| d[w] + 1 == d[cur]).min().expect("BFS predecessor exists");
        path.push(cur);
    }
    path.reverse();
    Ok(path)
}

fn check_output(g: &WeightedGraph, out: &Broadcast, problem: Problem, p: u64, num: u64, input: u64, what: &str) -> Result<(), TransformError> {
    if let Some(v) = find_violation(g, out, problem, false)? {
        return Err(TransformError::Assertion(format!("{what} output invalid: {v}")));
    }
    if out.max_value() > p {
        return Err(TransformError::Assertion(format!("{what} output exceeds p = {p}")));
    }
    if num * out.value() < p * input {
        return Err(TransformError::Assertion(format!("{what} output value {} below the guarantee", out.value())));
    }
    Ok(())
}

/// Independent `p`-broadcast of value at least `p/(2p+2)` of `f`'s.
pub fn truncate_independent(g: &WeightedGraph, f: &Broadcast, p: u64) -> Result<Broadcast, TransformError> {
    if p == 0 {
        return Err(TransformError::PTooSmall);
    }
    check_size(g, f)?;
    if find_violation(g, f, Problem::Independence, false)?.is_some() {
        return Err(TransformError::InvalidInput("an independent broadcast"));
    }
    let f = normalize_single(g, f);
    let mut out = Broadcast::zeros(g.n());
    for v in f.broadcasters() {
        let s = f.get(v);
        if s <= 2 * p + 2 {
            out.set(v, s.min(p));
            continue;
        }
        let beta = s.div_ceil(2);
        let (a, b) = (beta / (p + 1), beta % (p + 1));
        let path = shortest_path(g, v, beta)?;
        for k in 0..a {
            out.set(path[(k * (p + 1)) as usize], p);
        }
        if b >= 1 {
            out.set(path[(a * (p + 1)) as usize], b);
        }
    }
    check_output(g, &out, Problem::Independence, p, 2 * p + 2, f.value(), "independent truncation")?;
    Ok(out)
}

/// `p`-broadcast packing of value at least `p/(2p+1)` of `f`'s.
pub fn truncate_packing(g: &WeightedGraph, f: &Broadcast, p: u64) -> Result<Broadcast, TransformError> {
    if p == 0 {
        return Err(TransformError::PTooSmall);
    }
    check_size(g, f)?;
    if find_violation(g, f, Problem::Packing, false)?.is_some() {
        return Err(TransformError::InvalidInput("a broadcast packing"));
    }
    let f = normalize_single(g, f);
    let mut out = Broadcast::zeros(g.n());
    for v in f.broadcasters() {
        let r = f.get(v);
        if r <= p {
            out.set(v, r);
            continue;
        }
        let (a, b) = ((r - p) / (2 * p + 1), (r - p) % (2 * p + 1));
        let path = shortest_path(g, v, r)?;
        for k in 0..=a {
            out.set(path[(k * (2 * p + 1)) as usize], p);
        }
        if b >= 3 {
            let half = b.div_ceil(2);
            let at = p + a * (2 * p + 1) + half;
            if at > r {
                return Err(TransformError::Assertion(format!("extra broadcaster index {at} beyond path length {r}")));
            }
            out.set(path[at as usize], half - 1);
        }
    }
    check_output(g, &out, Problem::Packing, p, 2 * p + 1, f.value(), "packing truncation")?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nice::make_nice;
    use crate::td::heuristic_decompose;
    use crate::validate::{is_broadcast_packing, is_independent_broadcast};

    fn path(n: usize) -> WeightedGraph {
        WeightedGraph::unweighted(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn epsilon_to_p() {
        assert_eq!(ApproxConfig::new(1, 4).unwrap().p(), 2);
        assert_eq!(ApproxConfig::new(1, 10).unwrap().p(), 5);
        assert_eq!("0.1".parse::<ApproxConfig>().unwrap().p(), 5);
        assert_eq!("1/6".parse::<ApproxConfig>().unwrap().p(), 3);
        assert!(ApproxConfig::new(1, 2).is_err());
        assert!(ApproxConfig::new(0, 2).is_err());
        assert!("abc".parse::<ApproxConfig>().is_err());
        for (num, den) in [(1, 3), (2, 9), (1, 100), (3, 7)] {
            let p = ApproxConfig::new(num, den).unwrap().p();
            // p/(2p+2) >= 1/2 - num/den
            assert!(2 * p * den >= (den - 2 * num) * (2 * p + 2));
        }
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_single_broadcast(&path(4)).values(), &[3, 0, 0, 0]);
        let star = WeightedGraph::unweighted(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(canonical_single_broadcast(&star).values(), &[0, 2, 0, 0]);
        let c4 = WeightedGraph::unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let f = canonical_single_broadcast(&c4);
        assert_eq!(f.value(), 2);
        assert!(is_broadcast_packing(&c4, &f, false).unwrap());
    }

    #[test]
    fn decide_examples() {
        let p10 = path(10);
        let d = decide_value_k(&p10, &make_nice(&heuristic_decompose(&p10)), 5, Problem::Independence).unwrap();
        assert!(d.yes && d.by_diameter);
        assert_eq!(d.witness.unwrap().value(), 5);
        let p4 = path(4);
        let nice = make_nice(&heuristic_decompose(&p4));
        let no = decide_value_k(&p4, &nice, 5, Problem::Independence).unwrap();
        assert!(!no.yes && no.witness.is_none());
        assert_eq!(no.optimum, Some(4));
        assert!(decide_value_k(&p4, &nice, 4, Problem::Independence).unwrap().yes);
        assert_eq!(decide_value_k(&p4, &nice, 0, Problem::Packing), Err(SolveError::KOutOfRange));
    }

    #[test]
    fn independent_figure() {
        let g = path(16);
        let out = truncate_independent(&g, &Broadcast::single(16, 0, 15), 2).unwrap();
        assert_eq!(out.value(), 6);
        assert_eq!((out.get(0), out.get(3), out.get(6)), (2, 2, 2));
        assert_eq!(out.broadcasters().count(), 3);
    }

    #[test]
    fn packing_figure() {
        let g = path(16);
        let out = truncate_packing(&g, &Broadcast::single(16, 0, 15), 2).unwrap();
        assert_eq!(out.value(), 7);
        let expect: Vec<(usize, u64)> = vec![(0, 2), (5, 2), (10, 2), (14, 1)];
        assert_eq!(out.broadcasters().map(|v| (v, out.get(v))).collect::<Vec<_>>(), expect);
    }

    #[test]
    fn identity_and_small_cases() {
        let g = path(8);
        let f = Broadcast::from_values(vec![2, 0, 0, 0, 0, 2, 0, 0]);
        assert_eq!(truncate_independent(&g, &f, 2).unwrap(), f);
        let pk = Broadcast::from_values(vec![2, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(truncate_packing(&g, &pk, 2).unwrap(), pk);
        assert_eq!(truncate_independent(&g, &Broadcast::single(8, 0, 6), 2).unwrap(), Broadcast::single(8, 0, 2));
        assert_eq!(truncate_packing(&g, &Broadcast::single(8, 0, 4), 2).unwrap(), Broadcast::single(8, 0, 2));
    }

    #[test]
    fn lone_center_broadcaster_moves() {
        // Center of P7 at value 6 > ecc 3 is allowed under the relaxed rule.
        let g = path(7);
        let f = Broadcast::single(7, 3, 6);
        let out = truncate_packing(&g, &f, 1).unwrap();
        assert!(is_broadcast_packing(&g, &out, true).unwrap());
        assert!(3 * out.value() >= 6);
        let out = truncate_independent(&g, &Broadcast::single(7, 3, 6), 1).unwrap();
        assert!(is_independent_broadcast(&g, &out, true).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let g = path(4);
        let bad = Broadcast::from_values(vec![1, 1, 0, 0]);
        assert!(matches!(truncate_independent(&g, &bad, 1), Err(TransformError::InvalidInput(_))));
        assert!(matches!(truncate_packing(&g, &Broadcast::zeros(4), 0), Err(TransformError::PTooSmall)));
        let w = WeightedGraph::new(3, [(0, 1, 3), (1, 2, 3)]).unwrap();
        assert_eq!(truncate_packing(&w, &Broadcast::single(3, 0, 6), 1), Err(TransformError::WeightedGraph));
    }

    #[test]
    fn approx_on_p4() {
        let g = path(4);
        let nice = make_nice(&heuristic_decompose(&g));
        let r = approx_bi(&g, &nice, ApproxConfig::new(1, 4).unwrap()).unwrap();
        assert_eq!((r.p, r.value), (2, 4));
        let clamped = approx_bi(&g, &nice, ApproxConfig::new(1, 100).unwrap()).unwrap();
        assert_eq!(clamped.p, 3);
    }
}
