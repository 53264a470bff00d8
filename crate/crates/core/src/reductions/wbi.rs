//! Weighted independence instance from a multicolored clique instance.

use crate::error::ReductionError;
use crate::graph::Broadcast;

use super::{check_scale, scaled, scaled_even, Builder, CliqueInstance, ReductionInstance, ReductionKind, Role};

pub fn gen_wbi_from_clique(inst: &CliqueInstance, scale: Option<f64>) -> Result<ReductionInstance, ReductionError> {
    check_scale(scale)?;
    let (k, n) = (inst.k as u64, inst.n as u64);
    let b = scaled_even(6 * n.pow(3) * k * k, scale);
    let alpha = b + n + 2;
    let a = scaled(13 * k * k * n.pow(3) * b, scale, 2);
    let target = a * (2 * alpha - 1) + (k + k * (k - 1) / 2) * (2 * b + 2 * n + 1);

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
            g.edge(l, v, 2 * j);
            g.edge(v, r, 2 * n + 2 - 2 * j);
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
                g.edge(ve, c, n);
                g.edge(ve, left[i - 1], 2 * b + 2 * n + 2 - 2 * mi64);
                g.edge(ve, right[i - 1], 2 * b + 2 * mi64);
                g.edge(ve, left[j - 1], 2 * b + 2 * n + 2 - 2 * mj64);
                g.edge(ve, right[j - 1], 2 * b + 2 * mj64);
                edge_vertices.push(((i, mi, j, mj), ve));
            }
        }
    }
    let s = g.vertex(Role::Center);
    for &x in left.iter().chain(&right).chain(&hubs) {
        g.edge(s, x, alpha - 2);
    }
    let first_pendant = g.roles.len();
    for x in 1..=a as usize {
        let f = g.vertex(Role::Pendant(x));
        g.edge(f, s, alpha);
    }
    let (graph, roles) = g.finish()?;

    let witness = inst.planted.as_ref().map(|m| {
        let mut w = Broadcast::zeros(graph.n());
        for f in first_pendant..graph.n() {
            w.set(f, 2 * alpha - 1);
        }
        for (i, &mi) in m.iter().enumerate() {
            w.set(members[i][mi - 1], 2 * b + 2 * n + 1);
        }
        for &((i, mi, j, mj), ve) in &edge_vertices {
            if m[i - 1] == mi && m[j - 1] == mj {
                w.set(ve, 2 * b + 2 * n + 1);
            }
        }
        w
    });
    Ok(ReductionInstance {
        kind: ReductionKind::WbiFromClique,
        graph,
        target,
        witness,
        constants: vec![("k", k), ("n", n), ("b", b), ("alpha", alpha), ("a", a), ("M", target)],
        roles,
        scaled: scale.is_some(),
        source: None,
    })
}
