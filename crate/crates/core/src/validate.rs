//! Independence and packing predicates, with a diagnosis of the first
//! violated constraint.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::GraphError;
use crate::graph::{check_size, Broadcast, Vertex, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Problem {
    /// Broadcast Independence: `d(u,v) > max(f(u), f(v))`.
    Independence,
    /// Broadcast Packing: `d(u,v) > f(u) + f(v)`.
    Packing,
}

impl Problem {
    pub fn short_name(self) -> &'static str {
        match self {
            Problem::Independence => "bi",
            Problem::Packing => "bp",
        }
    }

    /// Whether two broadcasters at distance `d` with values `a` and `b` may coexist.
    #[inline]
    pub fn compatible(self, d: u64, a: u64, b: u64) -> bool {
        match self {
            Problem::Independence => d > a.max(b),
            Problem::Packing => d > a + b,
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bi" => Ok(Problem::Independence),
            "bp" => Ok(Problem::Packing),
            other => Err(format!("unknown problem {other:?}, expected bi or bp")),
        }
    }
}

/// The first constraint a broadcast breaks. Vertices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `f(v)` exceeds its cap: `ecc(v)` in strict mode, the diameter otherwise.
    ValueAboveCap { vertex: Vertex, value: u64, cap: u64, strict: bool },
    /// Two broadcasters too close for the problem's pairwise condition.
    Conflict { problem: Problem, u: Vertex, v: Vertex, dist: u64, fu: u64, fv: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::ValueAboveCap { vertex, value, cap, strict } => {
                let what = if strict { "ecc" } else { "diam" };
                write!(f, "vertex {} value {} > {} {}", vertex + 1, value, what, cap)
            }
            Violation::Conflict { problem, u, v, dist, fu, fv } => match problem {
                Problem::Independence => write!(f, "pair {} {}: {} <= max({},{})", u + 1, v + 1, dist, fu, fv),
                Problem::Packing => write!(f, "pair {} {}: {} <= {}+{}", u + 1, v + 1, dist, fu, fv),
            },
        }
    }
}

/// Returns the first violated constraint, or `None` when `f` is valid.
/// Caps are checked first in vertex order, then broadcaster pairs in
/// lexicographic order.
pub fn find_violation(g: &WeightedGraph, f: &Broadcast, problem: Problem, strict: bool) -> Result<Option<Violation>, GraphError> {
    check_size(g, f)?;
    for v in f.broadcasters() {
        let cap = if strict { g.ecc(v) } else { g.diameter() };
        if f.get(v) > cap {
            return Ok(Some(Violation::ValueAboveCap { vertex: v, value: f.get(v), cap, strict }));
        }
    }
    if g.distances().is_some() {
        Ok(dense_pairs(g, f, problem))
    } else {
        Ok(twin_pairs(g, f, problem))
    }
}

fn dense_pairs(g: &WeightedGraph, f: &Broadcast, problem: Problem) -> Option<Violation> {
    let xs: Vec<Vertex> = f.broadcasters().collect();
    for (i, &u) in xs.iter().enumerate() {
        for &v in &xs[i + 1..] {
            let d = g.dist(u, v);
            if !problem.compatible(d, f.get(u), f.get(v)) {
                return Some(Violation::Conflict { problem, u, v, dist: d, fu: f.get(u), fv: f.get(v) });
            }
        }
    }
    None
}

/// Pairwise check for graphs without a dense matrix. Pendant broadcasters
/// sharing hub, edge weight and value are interchangeable (swapping two of
/// them is an automorphism), so each such class is checked once internally
/// (its members sit at distance `2w`) and represented by one member against
/// everything else. One single-source search per class.
fn twin_pairs(g: &WeightedGraph, f: &Broadcast, problem: Problem) -> Option<Violation> {
    let mut classes: BTreeMap<(Vertex, u64, u64), Vec<Vertex>> = BTreeMap::new();
    let mut reps: Vec<Vec<Vertex>> = Vec::new();
    for v in f.broadcasters() {
        let nb = g.neighbors(v);
        if nb.len() == 1 && g.degree(nb[0].0) > 1 {
            classes.entry((nb[0].0, nb[0].1, f.get(v))).or_default().push(v);
        } else {
            reps.push(vec![v]);
        }
    }
    for ((_, w, val), members) in &classes {
        if members.len() >= 2 && !problem.compatible(2 * w, *val, *val) {
            return Some(Violation::Conflict { problem, u: members[0], v: members[1], dist: 2 * w, fu: *val, fv: *val });
        }
    }
    reps.extend(classes.into_values());
    reps.sort_by_key(|c| c[0]);
    let firsts: Vec<Vertex> = reps.iter().map(|c| c[0]).collect();
    for (i, &u) in firsts.iter().enumerate() {
        if i + 1 == firsts.len() {
            break;
        }
        let d = g.single_source(u);
        for &v in &firsts[i + 1..] {
            if !problem.compatible(d[v], f.get(u), f.get(v)) {
                return Some(Violation::Conflict { problem, u: u.min(v), v: u.max(v), dist: d[v], fu: f.get(u.min(v)), fv: f.get(u.max(v)) });
            }
        }
    }
    None
}

/// Independent broadcast check. `relaxed` caps values by the diameter
/// instead of per-vertex eccentricities.
pub fn is_independent_broadcast(g: &WeightedGraph, f: &Broadcast, relaxed: bool) -> Result<bool, GraphError> {
    Ok(find_violation(g, f, Problem::Independence, !relaxed)?.is_none())
}

/// Broadcast packing check, distance form.
pub fn is_broadcast_packing(g: &WeightedGraph, f: &Broadcast, relaxed: bool) -> Result<bool, GraphError> {
    Ok(find_violation(g, f, Problem::Packing, !relaxed)?.is_none())
}

pub fn is_valid(g: &WeightedGraph, f: &Broadcast, problem: Problem, relaxed: bool) -> Result<bool, GraphError> {
    Ok(find_violation(g, f, problem, !relaxed)?.is_none())
}
