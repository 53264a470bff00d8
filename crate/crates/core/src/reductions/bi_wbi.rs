//! Unweighted independence instance from a weighted one: edges become
//! paths, path midpoints hang from `s`, and long pendant paths at `s` keep
//! the interior vertices silent.

use crate::error::ReductionError;
use crate::graph::{Broadcast, WeightedGraph};
use crate::validate::{find_violation, Problem};

use super::{check_scale, scaled, Builder, ReductionInstance, ReductionKind, Role};

/// `target` is `M_1`; when absent it is the value of `witness`. Edges
/// heavier than the diameter are an error unless `normalize` drops them.
pub fn gen_bi_from_wbi(
    g1: &WeightedGraph,
    target: Option<u64>,
    witness: Option<&Broadcast>,
    normalize: bool,
    scale: Option<f64>,
) -> Result<ReductionInstance, ReductionError> {
    check_scale(scale)?;
    let diam = g1.diameter();
    for e in g1.edges() {
        if e.w % 2 == 1 {
            return Err(ReductionError::OddWeight { u: e.u + 1, v: e.v + 1, weight: e.w });
        }
        if e.w > diam && !normalize {
            return Err(ReductionError::WeightAboveDiameter { u: e.u + 1, v: e.v + 1, weight: e.w, diam });
        }
    }
    let g1 = if g1.edges().iter().any(|e| e.w > diam) {
        WeightedGraph::new(g1.n(), g1.edges().iter().filter(|e| e.w <= diam).map(|e| (e.u, e.v, e.w)))?
    } else {
        g1.clone()
    };
    let m1 = match (target, witness) {
        (Some(t), Some(w)) if w.value() != t => {
            return Err(ReductionError::Malformed { line: 0, reason: format!("witness value {} differs from target {}", w.value(), t) })
        }
        (Some(t), _) => t,
        (None, Some(w)) => w.value(),
        (None, None) => return Err(ReductionError::Malformed { line: 0, reason: "need a target value or a witness".into() }),
    };
    if m1 <= diam {
        return Err(ReductionError::TargetTooSmall { target: m1, diam });
    }
    if let Some(w) = witness {
        if let Some(v) = find_violation(&g1, w, Problem::Independence, false)? {
            return Err(ReductionError::Malformed { line: 0, reason: format!("source witness is not independent: {v}") });
        }
    }

    let n = g1.n() as u64;
    let a = scaled(3 * n * n * diam * diam, scale, 2);
    let target2 = a * (diam - 1) + m1;

    let mut g = Builder::new();
    for v in 0..g1.n() {
        g.vertex(Role::Original(v + 1));
    }
    let s = g.vertex(Role::Center);
    for e in g1.edges() {
        let (u1, v1) = (e.u + 1, e.v + 1);
        let mid_at = e.w / 2;
        let spoke = (diam - e.w) / 2;
        let mut prev = e.u;
        let mut mid = s;
        for t in 1..e.w {
            let x = if t == mid_at && spoke == 0 { s } else { g.vertex(Role::Subdivision { u: u1, v: v1, t }) };
            g.edge(prev, x, 1);
            if t == mid_at {
                mid = x;
            }
            prev = x;
        }
        g.edge(prev, e.v, 1);
        if spoke > 0 {
            let mut prev = s;
            for t in 1..spoke {
                let q = g.vertex(Role::Spoke { u: u1, v: v1, t });
                g.edge(prev, q, 1);
                prev = q;
            }
            g.edge(prev, mid, 1);
        }
    }
    let mut pendants = Vec::new();
    for x in 1..=a as usize {
        let f = g.vertex(Role::Pendant(x));
        pendants.push(f);
        let mut prev = f;
        for t in 1..diam / 2 {
            let y = g.vertex(Role::ForbidPath { x, t });
            g.edge(prev, y, 1);
            prev = y;
        }
        g.edge(prev, s, 1);
    }
    let (graph, roles) = g.finish()?;

    let planted = witness.map(|w| {
        let mut out = Broadcast::zeros(graph.n());
        for v in w.broadcasters() {
            out.set(v, w.get(v));
        }
        for &f in &pendants {
            out.set(f, diam - 1);
        }
        out
    });
    Ok(ReductionInstance {
        kind: ReductionKind::BiFromWbi,
        graph,
        target: target2,
        witness: planted,
        constants: vec![("n", n), ("diam", diam), ("a", a), ("M1", m1), ("M", target2)],
        roles,
        scaled: scale.is_some(),
        source: Some(g1),
    })
}
