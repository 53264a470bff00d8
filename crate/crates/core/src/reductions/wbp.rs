//! Weighted packing instance from a multicolored clique instance.

use crate::error::ReductionError;
use crate::graph::Broadcast;

use super::{check_scale, scaled, scaled_even, Builder, CliqueInstance, ReductionInstance, ReductionKind, Role};

/// Weight of the `v_e`-`c_ij` edges. At `n = 2` the literal `n/2 = 1`
/// puts `v_e` at distance `b+n` from `s` through `c_ij`, so the planted
/// `f_1` (value 2) and a planted `v_e` (value `b+n`) sit at distance
/// exactly `2+b+n` and the forward witness is not a packing. Weight 2
/// restores `d(s, v_e) = b+n+1`; for `n >= 4` nothing changes.
pub fn default_hub_weight(n: usize) -> u64 {
    (n as u64 / 2).max(2)
}

pub fn gen_wbp_from_clique(inst: &CliqueInstance, scale: Option<f64>) -> Result<ReductionInstance, ReductionError> {
    gen_wbp_with_hub_weight(inst, scale, default_hub_weight(inst.n))
}

pub fn gen_wbp_with_hub_weight(inst: &CliqueInstance, scale: Option<f64>, hub_weight: u64) -> Result<ReductionInstance, ReductionError> {
    check_scale(scale)?;
    if hub_weight == 0 {
        return Err(ReductionError::Malformed { line: 0, reason: "hub weight must be positive".into() });
    }
    let (k, n) = (inst.k as u64, inst.n as u64);
    let b = scaled_even(5 * k * k * n.pow(3), scale);
    let a = scaled(11 * k * k * n.pow(3) * b, scale, 2);
    let target = a + 1 + (k + k * (k - 1) / 2) * (b + n);

    let mut g = Builder::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut members = Vec::new();
    for i in 1..=inst.k {
        let l = g.vertex(Role::Left(i));
        let vs: Vec<_> = (1..=inst.n).map(|j| g.vertex(Role::Member { class: i, index: j })).collect();
        let r = g.vertex(Role::Right(i));
        for (j, &v) in vs.iter().enumerate() {
            let j = j as u64 + 1;
            g.edge(l, v, j + 1);
            g.edge(v, r, n + 2 - j);
        }
        left.push(l);
        right.push(r);
        members.push(vs);
    }
    let mut hubs = Vec::new();
    let mut edge_vertices = Vec::new();
    for i in 1..=inst.k {
        for j in i + 1..=inst.k {
            let c = g.vertex(Role::Hub(i, j));
            hubs.push(c);
            for (mi, mj) in inst.edges_between(i, j) {
                let ve = g.vertex(Role::EdgeVertex { i, a: mi, j, b: mj });
                let (mi64, mj64) = (mi as u64, mj as u64);
                g.edge(ve, c, hub_weight);
                g.edge(ve, left[i - 1], 2 * b + 2 * n - mi64);
                g.edge(ve, right[i - 1], 2 * b + n + mi64 - 1);
                g.edge(ve, left[j - 1], 2 * b + 2 * n - mj64);
                g.edge(ve, right[j - 1], 2 * b + n + mj64 - 1);
                edge_vertices.push(((i, mi, j, mj), ve));
            }
        }
    }
    let s = g.vertex(Role::Center);
    for &x in left.iter().chain(&right) {
        g.edge(s, x, b + n);
    }
    for &v in members.iter().flatten() {
        g.edge(s, v, b + n + 1);
    }
    for &c in &hubs {
        g.edge(s, c, b + n - 1);
    }
    for &(_, ve) in &edge_vertices {
        g.edge(s, ve, b + n + 1);
    }
    let first_pendant = g.roles.len();
    for x in 1..=a as usize {
        let f = g.vertex(Role::Pendant(x));
        g.edge(f, s, 2);
    }
    let (graph, roles) = g.finish()?;

    let witness = inst.planted.as_ref().map(|m| {
        let mut w = Broadcast::zeros(graph.n());
        for f in first_pendant..graph.n() {
            w.set(f, if f == first_pendant { 2 } else { 1 });
        }
        for (i, &mi) in m.iter().enumerate() {
            w.set(members[i][mi - 1], b + n);
        }
        for &((i, mi, j, mj), ve) in &edge_vertices {
            if m[i - 1] == mi && m[j - 1] == mj {
                w.set(ve, b + n);
            }
        }
        w
    });
    Ok(ReductionInstance {
        kind: ReductionKind::WbpFromClique,
        graph,
        target,
        witness,
        constants: vec![("k", k), ("n", n), ("b", b), ("a", a), ("hub_weight", hub_weight), ("M", target)],
        roles,
        scaled: scale.is_some(),
        source: None,
    })
}
