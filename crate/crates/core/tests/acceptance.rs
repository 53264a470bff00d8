//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use bcast_core::dp::independence::signature_of;
use bcast_core::dp::packing::pack_signature_of;
use bcast_core::dp::{all_tables, IndepScheme, PackScheme, Table};
use bcast_core::oracle::{all_valid_broadcasts, brute_force_optimum, enumerate_small_graphs, maximum_independent_set, random_connected_graph};
use bcast_core::reductions::{gen_bi_from_wbi, gen_wbi_from_clique, gen_wbp_from_clique, parse_clique_instance, self_checks, ReductionInstance, Role};
use bcast_core::td::random_decompose;
use bcast_core::transforms::{approx_bi, solve_exact, truncate_independent, truncate_packing, ApproxConfig};
use bcast_core::validate::is_valid;
use bcast_core::{heuristic_decompose, make_nice, parse_graph, Broadcast, NiceTreeDecomposition, Problem, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Exhaustive graphs on 1..=5 vertices, then 100 random graphs at each of n = 6, 7.
fn criterion_one_graphs() -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.extend(enumerate_small_graphs(n).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [6, 7] {
        for _ in 0..100 {
            let density = rng.gen_range(0.0..0.6);
            out.push(random_connected_graph(n, density, 1..=1, &mut rng));
        }
    }
    out
}

/// Alternates heuristic and random decompositions so both shapes are exercised.
fn decomposition(g: &WeightedGraph, i: usize, rng: &mut ChaCha8Rng) -> NiceTreeDecomposition {
    if i.is_multiple_of(2) {
        make_nice(&heuristic_decompose(g))
    } else {
        make_nice(&random_decompose(g, rng))
    }
}

fn oracle_equivalence(graphs: &[WeightedGraph], problem: Problem) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases = 0;
    for (i, g) in graphs.iter().enumerate() {
        let ntd = decomposition(g, i, &mut rng);
        for p in 1..=g.diameter() {
            let dp = solve_exact(g, &ntd, problem, p).map_err(|e| e.to_string())?;
            let bf = brute_force_optimum(g, problem, p).map_err(|e| e.to_string())?;
            ensure(dp.value == bf.value, || format!("graph {i} p={p}: dp {} oracle {}\n{}", dp.value, bf.value, g.to_text()))?;
            ensure(is_valid(g, &dp.witness, problem, true).unwrap() && dp.witness.value() == dp.value && dp.witness.max_value() <= p, || {
                format!("graph {i} p={p}: bad dp witness {:?}", dp.witness)
            })?;
            if g.n() <= 5 {
                let naive = common::naive_optimum(g, problem == Problem::Independence, p);
                ensure(naive == dp.value, || format!("graph {i} p={p}: dp {} naive {}", dp.value, naive))?;
            }
            cases += 1;
        }
    }
    Ok(format!("{} graphs, {cases} (graph, p) cases", graphs.len()))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cases = 0;
    for i in 0..100 {
        let n = rng.gen_range(2..=6);
        let g = random_connected_graph(n, rng.gen_range(0.0..0.7), 1..=5, &mut rng);
        let ntd = decomposition(&g, i, &mut rng);
        for problem in [Problem::Independence, Problem::Packing] {
            for p in 1..=g.diameter() {
                let dp = solve_exact(&g, &ntd, problem, p).map_err(|e| e.to_string())?;
                let bf = brute_force_optimum(&g, problem, p).map_err(|e| e.to_string())?;
                ensure(dp.value == bf.value, || format!("{problem:?} p={p}: dp {} oracle {}\n{}", dp.value, bf.value, g.to_text()))?;
                ensure(is_valid(&g, &dp.witness, problem, true).unwrap(), || format!("{problem:?} p={p}: invalid dp witness"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("100 weighted graphs, {cases} (graph, problem, p) cases"))
}

fn criterion_4(graphs: &[WeightedGraph]) -> Outcome {
    // p = 1 needs diameter at least 1, which rules out the single vertex.
    let mut skipped = 0;
    for (i, g) in graphs.iter().enumerate() {
        if g.diameter() == 0 {
            skipped += 1;
            continue;
        }
        let ntd = make_nice(&heuristic_decompose(g));
        let v = solve_exact(g, &ntd, Problem::Independence, 1).map_err(|e| e.to_string())?.value;
        let mis = maximum_independent_set(g);
        ensure(v == mis as u64, || format!("graph {i}: p=1 value {v}, independence number {mis}"))?;
        if g.n() <= 5 {
            let naive = common::naive_independence_number(g);
            ensure(naive == mis, || format!("graph {i}: branching {mis}, subset scan {naive}"))?;
        }
    }
    Ok(format!("{} graphs ({skipped} of diameter 0 skipped)", graphs.len() - skipped))
}

fn criterion_5(graphs: &[WeightedGraph]) -> Outcome {
    let mut cases = 0;
    for (i, g) in graphs.iter().enumerate() {
        let ntd = make_nice(&heuristic_decompose(g));
        let opt = brute_force_optimum(g, Problem::Independence, g.diameter()).map_err(|e| e.to_string())?.value;
        for den in [4, 6, 10] {
            let cfg = ApproxConfig::new(1, den).unwrap();
            let p = cfg.p();
            ensure(p == den / 2, || format!("epsilon 1/{den} gave p={p}"))?;
            let a = approx_bi(g, &ntd, cfg).map_err(|e| e.to_string())?;
            ensure((2 * p + 2) * a.value >= p * opt, || format!("graph {i} eps 1/{den}: (2p+2)*{} < p*{opt}", a.value))?;
            ensure(a.value <= opt, || format!("graph {i} eps 1/{den}: approx {} above optimum {opt}", a.value))?;
            ensure(is_valid(g, &a.witness, Problem::Independence, true).unwrap(), || format!("graph {i}: invalid approx witness"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (graph, epsilon) cases"))
}

/// Random valid broadcast with values skewed high, so truncation has work to do.
fn sample_broadcast(g: &WeightedGraph, problem: Problem, rng: &mut ChaCha8Rng) -> Broadcast {
    let mut f = Broadcast::zeros(g.n());
    let mut order: Vec<usize> = (0..g.n()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    for v in order {
        let hi = g.diameter();
        let value = rng.gen_range(1..=hi);
        f.set(v, value);
        if !is_valid(g, &f, problem, true).unwrap() {
            f.set(v, 0);
        }
    }
    f
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    for problem in [Problem::Independence, Problem::Packing] {
        let mut pairs = 0;
        while pairs < 200 {
            let n = rng.gen_range(2..=8);
            let g = random_connected_graph(n, rng.gen_range(0.0..0.4), 1..=1, &mut rng);
            let f = sample_broadcast(&g, problem, &mut rng);
            if f.value() == 0 {
                continue;
            }
            pairs += 1;
            for p in 1..=3 {
                let out = match problem {
                    Problem::Independence => truncate_independent(&g, &f, p),
                    Problem::Packing => truncate_packing(&g, &f, p),
                }
                .map_err(|e| format!("{problem:?} p={p} on {:?}: {e}", f.values()))?;
                let factor = if problem == Problem::Independence { 2 * p + 2 } else { 2 * p + 1 };
                ensure(is_valid(&g, &out, problem, true).unwrap(), || format!("{problem:?} p={p}: output invalid {:?}", out.values()))?;
                ensure(out.max_value() <= p, || format!("{problem:?} p={p}: cap broken {:?}", out.values()))?;
                ensure(factor * out.value() >= p * f.value(), || format!("{problem:?} p={p}: {factor}*{} < {p}*{}", out.value(), f.value()))?;
                checked += 1;
            }
        }
    }
    let path = common::path_graph(16);
    let loud = Broadcast::single(16, 0, 15);
    let bi = truncate_independent(&path, &loud, 2).map_err(|e| e.to_string())?.value();
    let bp = truncate_packing(&path, &loud, 2).map_err(|e| e.to_string())?.value();
    ensure(bi == 6, || format!("independence figure: contribution {bi}, expected 6"))?;
    ensure(bp == 7, || format!("packing figure: contribution {bp}, expected 7"))?;
    Ok(format!("{checked} (pair, p) checks; figures give 6 and 7"))
}

fn require_checks(inst: &ReductionInstance) -> Result<Vec<String>, String> {
    let mut names = Vec::new();
    for c in self_checks(inst) {
        ensure(c.ok, || format!("{} {}: {}", inst.kind.name(), c.name, c.detail))?;
        names.push(c.name.to_string());
    }
    let w = inst.witness.as_ref().ok_or_else(|| format!("{} has no witness", inst.kind.name()))?;
    ensure(w.value() == inst.target, || format!("{} witness {} target {}", inst.kind.name(), w.value(), inst.target))?;
    Ok(names)
}

fn criterion_7() -> Outcome {
    let clique = parse_clique_instance("p mcc 2 2\ne 1 1 2 1\ne 1 2 2 2\ne 1 2 2 1\nw 2 2\n").map_err(|e| e.to_string())?;
    let (k, n) = (2u64, 2u64);

    let wbi = gen_wbi_from_clique(&clique, None).map_err(|e| e.to_string())?;
    let b = 6 * n.pow(3) * k * k;
    let alpha = b + n + 2;
    let a = 13 * k * k * n.pow(3) * b;
    let m = a * (2 * alpha - 1) + (k + k * (k - 1) / 2) * (2 * b + 2 * n + 1);
    ensure((b, a) == (192, 79_872), || format!("wbi constants b={b} a={a}"))?;
    for (name, want) in [("b", b), ("alpha", alpha), ("a", a), ("M", m)] {
        ensure(wbi.constant(name) == Some(want), || format!("wbi {name} = {:?}, expected {want}", wbi.constant(name)))?;
    }
    ensure(wbi.target == m, || format!("wbi target {} expected {m}", wbi.target))?;
    let wbi_checks = require_checks(&wbi)?;
    ensure(wbi.graph.edges().iter().all(|e| e.w % 2 == 0), || "wbi has an odd weight".into())?;

    let wbp = gen_wbp_from_clique(&clique, None).map_err(|e| e.to_string())?;
    let b = 5 * k * k * n.pow(3);
    let a = 11 * k * k * n.pow(3) * b;
    let m = a + 1 + (k + k * (k - 1) / 2) * (b + n);
    ensure((b, a, m) == (160, 56_320, 56_321 + 3 * 162), || format!("wbp constants b={b} a={a} M={m}"))?;
    for (name, want) in [("b", b), ("a", a), ("M", m)] {
        ensure(wbp.constant(name) == Some(want), || format!("wbp {name} = {:?}, expected {want}", wbp.constant(name)))?;
    }
    let wbp_checks = require_checks(&wbp)?;

    let g1 = parse_graph("p bcast 4 4\ne 1 2 6\ne 2 3 2\ne 1 4 4\ne 2 4 4\n").map_err(|e| e.to_string())?;
    let sigma1 = Broadcast::from_values(vec![7, 0, 7, 0]);
    let biw = gen_bi_from_wbi(&g1, None, Some(&sigma1), false, None).map_err(|e| e.to_string())?;
    let diam = g1.diameter();
    let a = 3 * 16 * diam * diam;
    ensure(diam == 8 && biw.constant("a") == Some(a), || format!("bi-wbi diam {diam} a {:?}", biw.constant("a")))?;
    ensure(biw.target == a * (diam - 1) + 14, || format!("bi-wbi target {}", biw.target))?;
    ensure(biw.graph.is_unit_weight(), || "bi-wbi output is weighted".into())?;
    let forbid_len = biw.roles.iter().filter(|r| matches!(r, Role::ForbidPath { x: 1, .. })).count() + 1;
    ensure(forbid_len as u64 == diam / 2, || format!("forbid path length {forbid_len}"))?;
    let spoke = |u, v| biw.roles.iter().filter(|r| matches!(r, Role::Spoke { u: a, v: b, .. } if *a == u && *b == v)).count() + 1;
    ensure(spoke(1, 2) == 1 && spoke(2, 3) == 3, || format!("spoke lengths {} {}", spoke(1, 2), spoke(2, 3)))?;
    let biw_checks = require_checks(&biw)?;

    Ok(format!(
        "wbi {} vertices [{}]; wbp {} vertices [{}]; bi-wbi {} vertices [{}]",
        wbi.graph.n(),
        wbi_checks.join(","),
        wbp.graph.n(),
        wbp_checks.join(","),
        biw.graph.n(),
        biw_checks.join(",")
    ))
}

fn table_checks(g: &WeightedGraph, ntd: &NiceTreeDecomposition, tables: &[Table], problem: Problem, p: u64) -> Result<usize, String> {
    let mut count = 0;
    for (x, table) in tables.iter().enumerate().take(ntd.len()) {
        let support: Vec<usize> = ntd.forgotten(x).iter().collect();
        let mut best = 0;
        for f in all_valid_broadcasts(g, &support, problem, p) {
            let key = match problem {
                Problem::Independence => signature_of(g, ntd, x, &f, p).map(|s| s.to_key()),
                Problem::Packing => pack_signature_of(g, ntd, x, &f, p).map(|s| s.to_key()),
            }
            .map_err(|e| e.to_string())?;
            let entry = table.get(&key).ok_or_else(|| format!("{problem:?} node {x}: no entry for {:?} (key {key:?})", f.values()))?;
            ensure(entry >= f.value(), || format!("{problem:?} node {x}: entry {entry} below value {}", f.value()))?;
            best = best.max(f.value());
            count += 1;
        }
        let top = table.max_value().unwrap_or(0);
        ensure(top == best, || format!("{problem:?} node {x}: table max {top}, brute force {best}"))?;
    }
    Ok(count)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    for i in 0..20 {
        let n = rng.gen_range(2..=6);
        let weights = if i % 2 == 0 { 1..=1 } else { 1..=3 };
        let g = random_connected_graph(n, rng.gen_range(0.0..0.6), weights, &mut rng);
        let ntd = make_nice(&random_decompose(&g, &mut rng));
        let p = rng.gen_range(1..=g.diameter());
        let t = all_tables(&IndepScheme::new(p), &g, &ntd).map_err(|e| e.to_string())?;
        checked += table_checks(&g, &ntd, &t, Problem::Independence, p)?;
        let t = all_tables(&PackScheme::new(p), &g, &ntd).map_err(|e| e.to_string())?;
        checked += table_checks(&g, &ntd, &t, Problem::Packing, p)?;
    }
    Ok(format!("20 graphs, {checked} (node, broadcast) entries"))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let big = random_connected_graph(40, 0.04, 1..=1, &mut rng);
    common::write(d, "big.gr", &big.to_text());
    common::write(d, "small.gr", &random_connected_graph(7, 0.3, 1..=3, &mut rng).to_text());
    common::write(d, "p4.gr", "p bcast 4 3\ne 1 2\ne 2 3\ne 3 4\n");
    common::write(d, "p4.w", "v 1 2\nv 4 2\n");
    common::write(d, "c.mcc", "p mcc 2 2\ne 1 1 2 1\ne 1 2 2 2\nw 2 2\n");
    common::write(d, "g1.gr", "p bcast 4 4\ne 1 2 6\ne 2 3 2\ne 1 4 4\ne 2 4 4\n");
    common::write(d, "g1.w", "v 1 7\nv 3 7\n");

    let commands: Vec<(Vec<&str>, Vec<&str>)> = vec![
        (vec!["solve", "--problem", "bi", "--graph", "big.gr", "--p", "2", "--witness", "out.w"], vec!["out.w"]),
        (vec!["solve", "--problem", "bp", "--graph", "big.gr", "--p", "3", "--witness", "out.w"], vec!["out.w"]),
        (vec!["solve", "--problem", "bi", "--graph", "small.gr"], vec![]),
        (vec!["solve", "--problem", "bp", "--graph", "small.gr", "--json"], vec![]),
        (vec!["approx", "--graph", "big.gr", "--epsilon", "1/4", "--witness", "out.w"], vec!["out.w"]),
        (vec!["decide", "--problem", "bi", "--graph", "small.gr", "--k", "5"], vec![]),
        (vec!["decide", "--problem", "bp", "--graph", "small.gr", "--k", "100"], vec![]),
        (vec!["validate", "--problem", "bp", "--graph", "p4.gr", "--witness", "p4.w"], vec![]),
        (vec!["validate", "--problem", "bi", "--graph", "p4.gr", "--witness", "p4.w", "--strict"], vec![]),
        (vec!["oracle", "--problem", "bi", "--graph", "small.gr"], vec![]),
        (vec!["oracle", "--problem", "bp", "--graph", "small.gr", "--p", "2"], vec![]),
        (vec!["decompose", "--graph", "big.gr", "--out", "out.td"], vec!["out.td"]),
        (vec!["decompose", "--graph", "big.gr"], vec![]),
        (vec!["gen", "--reduction", "wbi-clique", "--in", "c.mcc", "--out-prefix", "gi", "--scale", "0.01"], vec!["gi.gr", "gi.w", "gi.meta"]),
        (vec!["gen", "--reduction", "wbp-clique", "--in", "c.mcc", "--out-prefix", "gp", "--scale", "0.01"], vec!["gp.gr", "gp.w", "gp.meta"]),
        (vec!["gen", "--reduction", "bi-wbi", "--in", "g1.gr", "--witness", "g1.w", "--out-prefix", "gb", "--scale", "0.05"], vec!["gb.gr", "gb.w", "gb.meta"]),
    ];
    let capture = |args: &[&str], files: &[&str]| -> (i32, Vec<u8>, Vec<Vec<u8>>) {
        let o = common::run_in(d, args);
        let contents = files.iter().map(|f| std::fs::read(d.join(f)).unwrap_or_default()).collect();
        (o.status.code().unwrap_or(-1), o.stdout, contents)
    };
    for (args, files) in &commands {
        let first = capture(args, files);
        let second = capture(args, files);
        ensure(first == second, || format!("two runs of {args:?} differ"))?;
        let mut one = vec!["--threads", "1"];
        one.extend(args.iter().copied());
        let mut four = vec!["--threads", "4"];
        four.extend(args.iter().copied());
        let t1 = capture(&one, files);
        let t4 = capture(&four, files);
        ensure(t1 == t4, || format!("--threads 1 and 4 differ on {args:?}"))?;
        ensure(t1 == first, || format!("--threads 1 differs from the default on {args:?}"))?;
        ensure(first.0 <= 1, || format!("{args:?} exited {}", first.0))?;
    }
    Ok(format!("{} invocations, each run twice and at 1 and 4 threads", commands.len()))
}

fn main() {
    let started = Instant::now();
    let graphs = criterion_one_graphs();
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence, independence", Box::new(|| oracle_equivalence(&graphs, Problem::Independence))),
        ("oracle equivalence, packing", Box::new(|| oracle_equivalence(&graphs, Problem::Packing))),
        ("weighted oracle equivalence", Box::new(criterion_3)),
        ("independence number at p=1", Box::new(|| criterion_4(&graphs))),
        ("approximation guarantee", Box::new(|| criterion_5(&graphs))),
        ("truncation transforms", Box::new(criterion_6)),
        ("reduction self-checks at full constants", Box::new(criterion_7)),
        ("table consistency", Box::new(criterion_8)),
        ("determinism", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
