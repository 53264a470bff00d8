//! Hardness-instance generators with planted witnesses and structural
//! self-checks. Only forward witnesses are produced and verified.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use crate::error::ReductionError;
use crate::graph::{Broadcast, Vertex, WeightedGraph};
use crate::validate::{find_violation, Problem};

mod bi_wbi;
mod wbi;
mod wbp;

pub use bi_wbi::gen_bi_from_wbi;
pub use wbi::gen_wbi_from_clique;
pub use wbp::{default_hub_weight, gen_wbp_from_clique, gen_wbp_with_hub_weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    WbiFromClique,
    BiFromWbi,
    WbpFromClique,
}

impl ReductionKind {
    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::WbiFromClique => "wbi-clique",
            ReductionKind::BiFromWbi => "bi-wbi",
            ReductionKind::WbpFromClique => "wbp-clique",
        }
    }

    pub fn problem(self) -> Problem {
        match self {
            ReductionKind::WbpFromClique => Problem::Packing,
            _ => Problem::Independence,
        }
    }
}

impl std::str::FromStr for ReductionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wbi-clique" => Ok(ReductionKind::WbiFromClique),
            "bi-wbi" => Ok(ReductionKind::BiFromWbi),
            "wbp-clique" => Ok(ReductionKind::WbpFromClique),
            other => Err(format!("unknown reduction {other:?}, expected wbi-clique, bi-wbi or wbp-clique")),
        }
    }
}

/// What a generated vertex stands for. Indices are 1-based like in files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Left(usize),
    Right(usize),
    /// `v_i^j`.
    Member {
        class: usize,
        index: usize,
    },
    Hub(usize, usize),
    /// `v_e` for the edge between `v_i^a` and `v_j^b`, `i < j`.
    EdgeVertex {
        i: usize,
        a: usize,
        j: usize,
        b: usize,
    },
    Center,
    Pendant(usize),
    /// A vertex of the weighted source graph.
    Original(Vertex),
    /// Interior vertex `t` of the path replacing source edge `{u, v}`.
    Subdivision {
        u: Vertex,
        v: Vertex,
        t: u64,
    },
    /// Interior vertex `t` of the spoke from `s` to that path's midpoint.
    Spoke {
        u: Vertex,
        v: Vertex,
        t: u64,
    },
    /// Interior vertex `t` of the path from pendant `x` to `s`.
    ForbidPath {
        x: usize,
        t: u64,
    },
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Role::Left(i) => write!(f, "l_{i}"),
            Role::Right(i) => write!(f, "r_{i}"),
            Role::Member { class, index } => write!(f, "v_{class}^{index}"),
            Role::Hub(i, j) => write!(f, "c_{i}_{j}"),
            Role::EdgeVertex { i, a, j, b } => write!(f, "e_{i}^{a}_{j}^{b}"),
            Role::Center => write!(f, "s"),
            Role::Pendant(x) => write!(f, "f_{x}"),
            Role::Original(v) => write!(f, "o_{v}"),
            Role::Subdivision { u, v, t } => write!(f, "p_{u}_{v}^{t}"),
            Role::Spoke { u, v, t } => write!(f, "q_{u}_{v}^{t}"),
            Role::ForbidPath { x, t } => write!(f, "f_{x}^{t}"),
        }
    }
}

/// A multicolored clique instance: `k` independent classes of `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueInstance {
    pub k: usize,
    pub n: usize,
    /// `(i, a, j, b)` with `i < j`, all 1-based.
    pub edges: Vec<(usize, usize, usize, usize)>,
    /// Chosen member of each class.
    pub planted: Option<Vec<usize>>,
}

impl CliqueInstance {
    pub fn new(k: usize, n: usize, edges: Vec<(usize, usize, usize, usize)>, planted: Option<Vec<usize>>) -> Result<Self, ReductionError> {
        let inst = CliqueInstance { k, n, edges: edges.into_iter().map(normalize_edge).collect(), planted };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<(), ReductionError> {
        if self.k < 2 {
            return Err(ReductionError::TooFewClasses(self.k));
        }
        if self.n == 0 || self.n % 2 == 1 {
            return Err(ReductionError::OddClassSize(self.n));
        }
        let mut seen = HashSet::new();
        for &(i, a, j, b) in &self.edges {
            if i == j {
                return Err(ReductionError::ClassNotIndependent { class: i });
            }
            for (c, x) in [(i, a), (j, b)] {
                if !(1..=self.k).contains(&c) || !(1..=self.n).contains(&x) {
                    return Err(ReductionError::Malformed { line: 0, reason: format!("vertex v_{c}^{x} out of range") });
                }
            }
            if !seen.insert((i, a, j, b)) {
                return Err(ReductionError::Malformed { line: 0, reason: format!("duplicate edge v_{i}^{a} v_{j}^{b}") });
            }
        }
        if let Some(m) = &self.planted {
            if m.len() != self.k || m.iter().any(|x| !(1..=self.n).contains(x)) {
                return Err(ReductionError::Malformed { line: 0, reason: "planted clique needs one member in 1..=n per class".into() });
            }
            for i in 1..=self.k {
                for j in i + 1..=self.k {
                    if !seen.contains(&(i, m[i - 1], j, m[j - 1])) {
                        return Err(ReductionError::NotAClique { i, a: m[i - 1], j, b: m[j - 1] });
                    }
                }
            }
        }
        Ok(())
    }

    /// Edges between classes `i < j`, in input order.
    pub(crate) fn edges_between(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().filter(move |e| e.0 == i && e.2 == j).map(|e| (e.1, e.3))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p mcc {} {}\n", self.k, self.n);
        for (i, a, j, b) in &self.edges {
            let _ = writeln!(out, "e {i} {a} {j} {b}");
        }
        if let Some(m) = &self.planted {
            let ms: Vec<String> = m.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "w {}", ms.join(" "));
        }
        out
    }
}

fn normalize_edge((i, a, j, b): (usize, usize, usize, usize)) -> (usize, usize, usize, usize) {
    if i <= j {
        (i, a, j, b)
    } else {
        (j, b, i, a)
    }
}

/// Reads `p mcc <k> <n>`, `e <i> <a> <j> <b>` and optional `w <m_1> .. <m_k>`.
pub fn parse_clique_instance(text: &str) -> Result<CliqueInstance, ReductionError> {
    let mut header = None;
    let mut edges = Vec::new();
    let mut planted = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let bad = |reason: String| ReductionError::Malformed { line, reason };
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad(format!("{t:?} is not a nonnegative integer")));
        match toks.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(bad("duplicate header".into()));
                }
                if toks.len() != 4 || toks[1] != "mcc" {
                    return Err(bad("expected \"p mcc <k> <n>\"".into()));
                }
                header = Some((num(toks[2])?, num(toks[3])?));
            }
            Some("e") => {
                if header.is_none() {
                    return Err(bad("edge before header".into()));
                }
                if toks.len() != 5 {
                    return Err(bad("expected \"e <i> <a> <j> <b>\"".into()));
                }
                let e = (num(toks[1])?, num(toks[2])?, num(toks[3])?, num(toks[4])?);
                if e.0 == e.2 {
                    return Err(ReductionError::ClassNotIndependent { class: e.0 });
                }
                edges.push(e);
            }
            Some("w") => {
                if planted.is_some() {
                    return Err(bad("duplicate planted clique".into()));
                }
                planted = Some(toks[1..].iter().map(|t| num(t)).collect::<Result<Vec<_>, _>>()?);
            }
            Some(other) => return Err(bad(format!("unknown line type {other:?}"))),
        }
    }
    let (k, n) = header.ok_or(ReductionError::Malformed { line: 0, reason: "missing \"p mcc <k> <n>\" header".into() })?;
    CliqueInstance::new(k, n, edges, planted)
}

/// Generated instance with its planted witness and gadget bookkeeping.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub kind: ReductionKind,
    pub graph: WeightedGraph,
    pub target: u64,
    pub witness: Option<Broadcast>,
    /// Named gadget constants in a fixed order.
    pub constants: Vec<(&'static str, u64)>,
    pub roles: Vec<Role>,
    /// Constants were shrunk by `--scale`; the correctness lemmas need not hold.
    pub scaled: bool,
    /// For the unweighted construction: the source graph it came from.
    pub source: Option<WeightedGraph>,
}

impl ReductionInstance {
    pub fn problem(&self) -> Problem {
        self.kind.problem()
    }

    pub fn constant(&self, name: &str) -> Option<u64> {
        self.constants.iter().find(|c| c.0 == name).map(|c| c.1)
    }

    pub fn vertices_with(&self, pred: impl Fn(&Role) -> bool) -> Vec<Vertex> {
        (0..self.roles.len()).filter(|&v| pred(&self.roles[v])).collect()
    }

    /// Sidecar metadata: constants, then one role line per vertex.
    pub fn meta_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "reduction {}", self.kind.name());
        let _ = writeln!(out, "problem {}", self.problem().short_name());
        let _ = writeln!(out, "scaled {}", if self.scaled { "yes" } else { "no" });
        for (name, v) in &self.constants {
            let _ = writeln!(out, "const {name} {v}");
        }
        let _ = writeln!(out, "target {}", self.target);
        for (v, r) in self.roles.iter().enumerate() {
            let _ = writeln!(out, "r {} {}", v + 1, r);
        }
        out
    }
}

/// Accumulates vertices with roles and weighted edges.
pub(crate) struct Builder {
    pub roles: Vec<Role>,
    pub edges: Vec<(Vertex, Vertex, u64)>,
}

impl Builder {
    pub fn new() -> Self {
        Builder { roles: Vec::new(), edges: Vec::new() }
    }

    pub fn vertex(&mut self, role: Role) -> Vertex {
        self.roles.push(role);
        self.roles.len() - 1
    }

    pub fn edge(&mut self, u: Vertex, v: Vertex, w: u64) {
        self.edges.push((u, v, w));
    }

    pub fn finish(self) -> Result<(WeightedGraph, Vec<Role>), ReductionError> {
        let g = WeightedGraph::new(self.roles.len(), self.edges)?;
        Ok((g, self.roles))
    }
}

/// `x * scale`, rounded, at least `floor`.
pub(crate) fn scaled(x: u64, scale: Option<f64>, floor: u64) -> u64 {
    match scale {
        None => x,
        Some(r) => ((x as f64 * r).round() as u64).max(floor),
    }
}

/// As [`scaled`] but rounded to an even number, at least 2.
pub(crate) fn scaled_even(x: u64, scale: Option<f64>) -> u64 {
    match scale {
        None => x,
        Some(r) => (2 * (x as f64 * r / 2.0).round() as u64).max(2),
    }
}

pub(crate) fn check_scale(scale: Option<f64>) -> Result<(), ReductionError> {
    match scale {
        Some(r) if !(r > 0.0 && r <= 1.0) => Err(ReductionError::BadScale(r)),
        _ => Ok(()),
    }
}

/// One structural self-check and its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn check(name: &'static str, ok: bool, detail: String) -> Check {
    Check { name, ok, detail }
}

fn covers_all_edges(g: &WeightedGraph, cover: &HashSet<Vertex>) -> Option<(Vertex, Vertex)> {
    g.edges().iter().find(|e| !cover.contains(&e.u) && !cover.contains(&e.v)).map(|e| (e.u, e.v))
}

/// Greedy maximal-matching vertex cover.
pub fn matching_vertex_cover(g: &WeightedGraph) -> HashSet<Vertex> {
    let mut cover = HashSet::new();
    for e in g.edges() {
        if !cover.contains(&e.u) && !cover.contains(&e.v) {
            cover.insert(e.u);
            cover.insert(e.v);
        }
    }
    cover
}

/// True when `g - removed` has no cycle.
pub fn is_forest_after_removal(g: &WeightedGraph, removed: &HashSet<Vertex>) -> bool {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in g.edges() {
        if removed.contains(&e.u) || removed.contains(&e.v) {
            continue;
        }
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Runs every self-check that applies to the instance's kind.
pub fn self_checks(inst: &ReductionInstance) -> Vec<Check> {
    let g = &inst.graph;
    let mut out = Vec::new();
    if let Some(w) = &inst.witness {
        let violation = find_violation(g, w, inst.problem(), false).ok().flatten();
        out.push(check("witness-valid", violation.is_none(), violation.map_or_else(|| "planted witness is valid".into(), |v| v.to_string())));
        out.push(check("witness-value", w.value() == inst.target, format!("value {} target {}", w.value(), inst.target)));
    }
    let c = |name| inst.constant(name).unwrap_or(0);
    match inst.kind {
        ReductionKind::WbiFromClique | ReductionKind::WbpFromClique => {
            let (b, n) = (c("b"), c("n"));
            let bound = if inst.kind == ReductionKind::WbiFromClique { 2 * b + 4 * n + 2 } else { 2 * b + 2 * n + 2 };
            out.push(check("diameter-bound", g.diameter() <= bound, format!("diam {} bound {}", g.diameter(), bound)));
            let cover: HashSet<Vertex> =
                inst.vertices_with(|r| matches!(r, Role::Left(_) | Role::Right(_) | Role::Hub(..) | Role::Center)).into_iter().collect();
            let k = c("k") as usize;
            let size_ok = cover.len() == 1 + 2 * k + k * (k - 1) / 2;
            let miss = covers_all_edges(g, &cover);
            out.push(check(
                "vertex-cover",
                miss.is_none() && size_ok,
                miss.map_or_else(|| format!("size {}", cover.len()), |(u, v)| format!("edge {} {} uncovered", u + 1, v + 1)),
            ));
            if inst.kind == ReductionKind::WbiFromClique {
                let odd = g.edges().iter().find(|e| e.w % 2 == 1);
                out.push(check(
                    "even-weights",
                    odd.is_none(),
                    odd.map_or_else(|| "all even".into(), |e| format!("edge {} {} weight {}", e.u + 1, e.v + 1, e.w)),
                ));
            }
        }
        ReductionKind::BiFromWbi => {
            let src = inst.source.as_ref().expect("unweighted construction keeps its source");
            out.push(check("diameter-preserved", g.diameter() == src.diameter(), format!("diam {} source {}", g.diameter(), src.diameter())));
            let originals = inst.vertices_with(|r| matches!(r, Role::Original(_)));
            let mut bad = None;
            for &u in &originals {
                let d = g.single_source(u);
                if let Some(&v) = originals.iter().find(|&&v| d[v] != src.dist(u, v)) {
                    bad = Some((u, v));
                    break;
                }
            }
            out.push(check(
                "distances-preserved",
                bad.is_none(),
                bad.map_or_else(|| "all original pairs".into(), |(u, v)| format!("pair {} {}", u + 1, v + 1)),
            ));
            let center = inst.vertices_with(|r| *r == Role::Center);
            let mut removed: HashSet<Vertex> = matching_vertex_cover(src).into_iter().collect();
            removed.extend(center);
            let forest = is_forest_after_removal(g, &removed);
            out.push(check("forest-after-cover", forest, format!("removed {} vertices", removed.len())));
        }
    }
    out
}
