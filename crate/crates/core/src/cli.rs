//! The `bcast` command-line frontend.
//!
//! Every subcommand prints `key value` lines (or bare `yes`/`no`, and
//! `v <vertex> <value>` witness lines). `--json` prints the same content as
//! one JSON object. Exit codes: 0 success, 1 negative answer, 2 bad input,
//! 3 internal assertion.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::error::{GraphError, OracleError, ReductionError, SolveError, TdError, TransformError};
use crate::graph::{parse_graph, parse_witness, Broadcast, WeightedGraph};
use crate::nice::{make_nice, NiceTreeDecomposition};
use crate::oracle::brute_force_optimum;
use crate::reductions::{
    default_hub_weight, gen_bi_from_wbi, gen_wbi_from_clique, gen_wbp_with_hub_weight, parse_clique_instance, self_checks, ReductionInstance, ReductionKind,
};
use crate::td::{heuristic_decompose, parse_td};
use crate::transforms::{approx_bi, decide_value_k, solve_exact, ApproxConfig};
use crate::validate::{find_violation, Problem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bcast", version, about = "Broadcast independence and packing on bounded-treewidth graphs")]
struct Cli {
    /// Print one JSON object instead of text lines.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the DP and the oracle.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact optimum of the p-bounded problem by tree-decomposition DP.
    Solve {
        #[command(flatten)]
        input: ProblemInput,
        /// Cap on broadcast values; defaults to the diameter.
        #[arg(long)]
        p: Option<u64>,
        /// Write the optimal broadcast here.
        #[arg(long, value_name = "OUT")]
        witness: Option<PathBuf>,
    },
    /// Independent broadcast within a (1 - epsilon) factor of optimal.
    Approx {
        #[arg(long, value_name = "F")]
        graph: PathBuf,
        #[arg(long, value_name = "F")]
        td: Option<PathBuf>,
        /// Rational such as 1/4 or 0.25, in (0, 1/2).
        #[arg(long, value_name = "RAT")]
        epsilon: ApproxConfig,
        #[arg(long, value_name = "OUT")]
        witness: PathBuf,
    },
    /// Is there a valid broadcast of value at least k?
    Decide {
        #[command(flatten)]
        input: ProblemInput,
        #[arg(long)]
        k: u64,
        #[arg(long, value_name = "OUT")]
        witness: Option<PathBuf>,
    },
    /// Check a broadcast and report its value or the first violation.
    Validate {
        #[arg(long)]
        problem: Problem,
        #[arg(long, value_name = "F")]
        graph: PathBuf,
        #[arg(long, value_name = "F")]
        witness: PathBuf,
        /// Cap each value by the vertex eccentricity instead of the diameter.
        #[arg(long)]
        strict: bool,
    },
    /// Exact optimum by exhaustive search on small graphs.
    Oracle {
        #[arg(long)]
        problem: Problem,
        #[arg(long, value_name = "F")]
        graph: PathBuf,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Heuristic tree decomposition in PACE .td format.
    Decompose {
        #[arg(long, value_name = "F")]
        graph: PathBuf,
        #[arg(long, value_name = "F.td")]
        out: Option<PathBuf>,
    },
    /// Write a hardness instance as P.gr, P.meta and, when planted, P.w.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct ProblemInput {
    #[arg(long)]
    problem: Problem,
    #[arg(long, value_name = "F")]
    graph: PathBuf,
    #[arg(long, value_name = "F")]
    td: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    reduction: ReductionKind,
    /// Clique instance, or a weighted graph for bi-wbi.
    #[arg(long = "in", value_name = "F")]
    input: PathBuf,
    #[arg(long, value_name = "P")]
    out_prefix: PathBuf,
    /// Shrink the gadget constants by this factor in (0, 1].
    #[arg(long, value_name = "R")]
    scale: Option<f64>,
    /// bi-wbi: the source target M1 (defaults to the source witness value).
    #[arg(long)]
    target: Option<u64>,
    /// bi-wbi: an independent broadcast of the source graph to transfer.
    #[arg(long, value_name = "F")]
    witness: Option<PathBuf>,
    /// bi-wbi: drop edges heavier than the diameter instead of failing.
    #[arg(long)]
    normalize: bool,
    /// wbp-clique: use the literal n/2 weight on the v_e-c_ij edges.
    #[arg(long)]
    literal_hub_weight: bool,
    /// Run the structural self-checks and report them.
    #[arg(long)]
    check: bool,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<TdError> for Failure {
    fn from(e: TdError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::BagMismatch { .. } | SolveError::SupportOutsideForgotten { .. } | SolveError::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::Assertion(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Text lines and the mirrored JSON object.
#[derive(Default)]
struct Report {
    text: String,
    json: Map<String, Value>,
    code: i32,
}

impl Report {
    fn field(&mut self, key: &str, value: impl Display + serde::Serialize) {
        self.text.push_str(&format!("{key} {value}\n"));
        self.json.insert(key.into(), json!(value));
    }

    fn answer(&mut self, yes: bool) {
        self.text.push_str(if yes { "yes\n" } else { "no\n" });
        self.json.insert("answer".into(), json!(if yes { "yes" } else { "no" }));
        self.code = if yes { EXIT_OK } else { EXIT_NO };
    }

    fn witness(&mut self, f: &Broadcast) {
        for v in f.broadcasters() {
            self.text.push_str(&format!("v {} {}\n", v + 1, f.get(v)));
        }
        let pairs: Vec<_> = f.broadcasters().map(|v| json!([v + 1, f.get(v)])).collect();
        self.json.insert("witness".into(), Value::Array(pairs));
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(out, "{}", e.render());
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_INPUT } else { EXIT_OK };
            }
            let msg = e.kind().to_string();
            let _ = writeln!(err, "error input: {msg}");
            let _ = write!(err, "{}", e.render());
            return EXIT_INPUT;
        }
    };
    let as_json = cli.json;

    let result = match cli.threads {
        Some(0) => Err(Failure::Input("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Err(Failure::Internal(format!("cannot start thread pool: {e}"))),
        },
        None => execute(cli.command),
    };

    match result {
        Ok(report) => {
            let written = if as_json { writeln!(out, "{}", Value::Object(report.json)) } else { write!(out, "{}", report.text) };
            if written.is_err() {
                return EXIT_INTERNAL;
            }
            report.code
        }
        Err(f) => {
            let (kind, msg) = match &f {
                Failure::Input(m) => ("input", m),
                Failure::Internal(m) => ("internal", m),
            };
            if as_json {
                let _ = writeln!(err, "{}", json!({ "error": kind, "message": msg }));
            } else {
                let _ = writeln!(err, "error {kind}: {msg}");
            }
            f.code()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    Ok(parse_graph(&read(path)?)?)
}

fn load_nice(g: &WeightedGraph, td: Option<&Path>) -> Result<NiceTreeDecomposition, Failure> {
    let td = match td {
        Some(path) => parse_td(&read(path)?, g)?,
        None => heuristic_decompose(g),
    };
    Ok(make_nice(&td))
}

fn recheck(g: &WeightedGraph, f: &Broadcast, problem: Problem) -> Result<(), Failure> {
    match find_violation(g, f, problem, false)? {
        None => Ok(()),
        Some(v) => Err(Failure::Internal(format!("computed broadcast is invalid: {v}"))),
    }
}

fn execute(command: Command) -> Result<Report, Failure> {
    let mut r = Report::default();
    match command {
        Command::Solve { input, p, witness } => {
            let g = load_graph(&input.graph)?;
            let ntd = load_nice(&g, input.td.as_deref())?;
            let p = p.unwrap_or(g.diameter());
            let sol = solve_exact(&g, &ntd, input.problem, p)?;
            recheck(&g, &sol.witness, input.problem)?;
            r.field("value", sol.value);
            r.field("p", p);
            r.field("width", ntd.width());
            match witness {
                Some(path) => write(&path, &sol.witness.to_witness())?,
                None => r.witness(&sol.witness),
            }
        }
        Command::Approx { graph, td, epsilon, witness } => {
            let g = load_graph(&graph)?;
            let ntd = load_nice(&g, td.as_deref())?;
            let a = approx_bi(&g, &ntd, epsilon)?;
            recheck(&g, &a.witness, Problem::Independence)?;
            let (num, den) = epsilon.epsilon();
            r.field("value", a.value);
            r.field("p", a.p);
            r.field("epsilon", format!("{num}/{den}"));
            write(&witness, &a.witness.to_witness())?;
        }
        Command::Decide { input, k, witness } => {
            let g = load_graph(&input.graph)?;
            let ntd = load_nice(&g, input.td.as_deref())?;
            let d = decide_value_k(&g, &ntd, k, input.problem)?;
            r.answer(d.yes);
            r.field("by_diameter", d.by_diameter);
            if let Some(opt) = d.optimum {
                r.field("optimum", opt);
            }
            if let Some(f) = &d.witness {
                recheck(&g, f, input.problem)?;
                match &witness {
                    Some(path) => write(path, &f.to_witness())?,
                    None => r.witness(f),
                }
            }
        }
        Command::Validate { problem, graph, witness, strict } => {
            let g = load_graph(&graph)?;
            let f = parse_witness(&read(&witness)?, g.n())?;
            match find_violation(&g, &f, problem, strict)? {
                None => r.field("valid", f.value()),
                Some(v) => {
                    r.field("invalid", v.to_string());
                    r.json.insert("violation".into(), json!(v));
                    r.code = EXIT_NO;
                }
            }
        }
        Command::Oracle { problem, graph, p } => {
            let g = load_graph(&graph)?;
            let p = p.unwrap_or(g.diameter());
            let sol = brute_force_optimum(&g, problem, p)?;
            r.field("value", sol.value);
            r.field("p", p);
            r.witness(&sol.witness);
        }
        Command::Decompose { graph, out } => {
            let g = load_graph(&graph)?;
            let td = heuristic_decompose(&g);
            let text = td.to_text();
            match out {
                Some(path) => {
                    write(&path, &text)?;
                    r.field("width", td.width());
                    r.field("bags", td.len());
                }
                None => {
                    r.text = text.clone();
                    r.json.insert("width".into(), json!(td.width()));
                    r.json.insert("bags".into(), json!(td.len()));
                    r.json.insert("td".into(), json!(text));
                }
            }
        }
        Command::Gen(args) => gen(args, &mut r)?,
    }
    Ok(r)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn gen(args: GenArgs, r: &mut Report) -> Result<(), Failure> {
    let text = read(&args.input)?;
    let inst: ReductionInstance = match args.reduction {
        ReductionKind::WbiFromClique => gen_wbi_from_clique(&parse_clique_instance(&text)?, args.scale)?,
        ReductionKind::WbpFromClique => {
            let c = parse_clique_instance(&text)?;
            let hub = if args.literal_hub_weight { (c.n as u64 / 2).max(1) } else { default_hub_weight(c.n) };
            gen_wbp_with_hub_weight(&c, args.scale, hub)?
        }
        ReductionKind::BiFromWbi => {
            let g1 = parse_graph(&text)?;
            let w = match &args.witness {
                Some(path) => Some(parse_witness(&read(path)?, g1.n())?),
                None => None,
            };
            gen_bi_from_wbi(&g1, args.target, w.as_ref(), args.normalize, args.scale)?
        }
    };
    write(&with_suffix(&args.out_prefix, ".gr"), &inst.graph.to_text())?;
    write(&with_suffix(&args.out_prefix, ".meta"), &inst.meta_text())?;
    if let Some(w) = &inst.witness {
        write(&with_suffix(&args.out_prefix, ".w"), &w.to_witness())?;
    }
    r.field("reduction", inst.kind.name());
    r.field("problem", inst.problem().short_name());
    r.field("scaled", if inst.scaled { "yes" } else { "no" });
    r.field("vertices", inst.graph.n());
    r.field("edges", inst.graph.edges().len());
    for (name, v) in &inst.constants {
        r.field(&format!("const_{name}"), v);
    }
    r.field("target", inst.target);
    r.field("witness", if inst.witness.is_some() { "yes" } else { "no" });
    if args.check {
        let mut failed = Vec::new();
        let mut checks = Vec::new();
        for c in self_checks(&inst) {
            r.text.push_str(&format!("check {} {} {}\n", c.name, if c.ok { "ok" } else { "fail" }, c.detail));
            checks.push(json!({ "name": c.name, "ok": c.ok, "detail": c.detail }));
            if !c.ok {
                failed.push(c.name);
            }
        }
        r.json.insert("checks".into(), Value::Array(checks));
        if !failed.is_empty() {
            return Err(Failure::Internal(format!("self-checks failed: {}", failed.join(", "))));
        }
    }
    Ok(())
}
