//! Python bindings. Vertices are 0-based here; the file formats stay 1-based.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use bcast_core::oracle::brute_force_optimum;
use bcast_core::reductions::{gen_bi_from_wbi, gen_wbi_from_clique, gen_wbp_from_clique, parse_clique_instance, self_checks, ReductionKind};
use bcast_core::transforms::{approx_bi, decide_value_k, solve_exact, truncate_independent, truncate_packing, ApproxConfig};
use bcast_core::validate::find_violation;
use bcast_core::{heuristic_decompose, make_nice, parse_graph, parse_td, Broadcast, NiceTreeDecomposition, Problem, SolveError, TransformError, WeightedGraph};

fn input_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn solve_err(e: SolveError) -> PyErr {
    match e {
        SolveError::BagMismatch { .. } | SolveError::SupportOutsideForgotten { .. } | SolveError::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        other => input_err(other),
    }
}

fn problem(name: &str) -> PyResult<Problem> {
    name.parse().map_err(PyValueError::new_err)
}

/// A connected graph with positive integer edge weights.
#[pyclass(name = "Graph", module = "bcast", frozen)]
struct PyGraph {
    inner: WeightedGraph,
}

#[pymethods]
impl PyGraph {
    /// `edges` holds `(u, v)` or `(u, v, w)` tuples with 0-based endpoints.
    #[new]
    fn new(n: usize, edges: Vec<Vec<u64>>) -> PyResult<Self> {
        let mut list = Vec::with_capacity(edges.len());
        for e in edges {
            match e.as_slice() {
                [u, v] => list.push((*u as usize, *v as usize, 1)),
                [u, v, w] => list.push((*u as usize, *v as usize, *w)),
                _ => return Err(PyValueError::new_err("edges must be (u, v) or (u, v, w)")),
            }
        }
        WeightedGraph::new(n, list).map(|inner| PyGraph { inner }).map_err(input_err)
    }

    /// Reads the `p bcast` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_graph(text).map(|inner| PyGraph { inner }).map_err(input_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize, u64)> {
        self.inner.edges().iter().map(|e| (e.u, e.v, e.w)).collect()
    }

    #[getter]
    fn diameter(&self) -> u64 {
        self.inner.diameter()
    }

    fn ecc(&self, v: usize) -> PyResult<u64> {
        self.check(v)?;
        Ok(self.inner.ecc(v))
    }

    fn dist(&self, u: usize, v: usize) -> PyResult<u64> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.inner.dist(u, v))
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={}, diameter={})", self.inner.n(), self.inner.edges().len(), self.inner.diameter())
    }
}

impl PyGraph {
    fn check(&self, v: usize) -> PyResult<()> {
        if v < self.inner.n() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("vertex {v} outside 0..{}", self.inner.n())))
        }
    }

    fn broadcast(&self, values: Vec<u64>) -> PyResult<Broadcast> {
        if values.len() != self.inner.n() {
            return Err(PyValueError::new_err(format!("expected {} values, got {}", self.inner.n(), values.len())));
        }
        Ok(Broadcast::from_values(values))
    }

    fn nice(&self, td: Option<&str>) -> PyResult<NiceTreeDecomposition> {
        let td = match td {
            Some(text) => parse_td(text, &self.inner).map_err(input_err)?,
            None => heuristic_decompose(&self.inner),
        };
        Ok(make_nice(&td))
    }
}

/// Optimal `p`-broadcast by tree-decomposition DP: `(value, values)`.
#[pyfunction]
#[pyo3(signature = (graph, problem = "bi", p = None, td = None))]
fn solve(py: Python<'_>, graph: &PyGraph, problem: &str, p: Option<u64>, td: Option<&str>) -> PyResult<(u64, Vec<u64>)> {
    let pr = self::problem(problem)?;
    let ntd = graph.nice(td)?;
    let p = p.unwrap_or(graph.inner.diameter());
    let sol = py.detach(|| solve_exact(&graph.inner, &ntd, pr, p)).map_err(solve_err)?;
    Ok((sol.value, sol.witness.values().to_vec()))
}

/// Approximate independence broadcast: `(p, value, values)`. `epsilon` is
/// a string such as `"1/4"` or `"0.25"`.
#[pyfunction]
#[pyo3(signature = (graph, epsilon, td = None))]
fn approx(py: Python<'_>, graph: &PyGraph, epsilon: &str, td: Option<&str>) -> PyResult<(u64, u64, Vec<u64>)> {
    let cfg: ApproxConfig = epsilon.parse().map_err(PyValueError::new_err)?;
    let ntd = graph.nice(td)?;
    let a = py.detach(|| approx_bi(&graph.inner, &ntd, cfg)).map_err(solve_err)?;
    Ok((a.p, a.value, a.witness.values().to_vec()))
}

/// Is there a valid broadcast of value at least `k`? `(answer, values or None)`.
#[pyfunction]
#[pyo3(signature = (graph, k, problem = "bi", td = None))]
fn decide(py: Python<'_>, graph: &PyGraph, k: u64, problem: &str, td: Option<&str>) -> PyResult<(bool, Option<Vec<u64>>)> {
    let pr = self::problem(problem)?;
    let ntd = graph.nice(td)?;
    let d = py.detach(|| decide_value_k(&graph.inner, &ntd, k, pr)).map_err(solve_err)?;
    Ok((d.yes, d.witness.map(|w| w.values().to_vec())))
}

/// `(valid, value, violation)`; the violation text uses 1-based vertices.
#[pyfunction]
#[pyo3(signature = (graph, values, problem = "bi", strict = false))]
fn validate(graph: &PyGraph, values: Vec<u64>, problem: &str, strict: bool) -> PyResult<(bool, u64, Option<String>)> {
    let f = graph.broadcast(values)?;
    let v = find_violation(&graph.inner, &f, self::problem(problem)?, strict).map_err(input_err)?;
    Ok((v.is_none(), f.value(), v.map(|v| v.to_string())))
}

/// Exhaustive optimum for graphs with at most 8 vertices (7 when weighted).
#[pyfunction]
#[pyo3(signature = (graph, problem = "bi", p = None))]
fn oracle(py: Python<'_>, graph: &PyGraph, problem: &str, p: Option<u64>) -> PyResult<(u64, Vec<u64>)> {
    let pr = self::problem(problem)?;
    let p = p.unwrap_or(graph.inner.diameter());
    let sol = py.detach(|| brute_force_optimum(&graph.inner, pr, p)).map_err(input_err)?;
    Ok((sol.value, sol.witness.values().to_vec()))
}

/// Heuristic tree decomposition as PACE `.td` text.
#[pyfunction]
fn decompose(graph: &PyGraph) -> String {
    heuristic_decompose(&graph.inner).to_text()
}

/// Truncates a valid broadcast to values at most `p` on a unit-weight graph.
#[pyfunction]
#[pyo3(signature = (graph, values, p, problem = "bi"))]
fn truncate(graph: &PyGraph, values: Vec<u64>, p: u64, problem: &str) -> PyResult<Vec<u64>> {
    let f = graph.broadcast(values)?;
    let out = match self::problem(problem)? {
        Problem::Independence => truncate_independent(&graph.inner, &f, p),
        Problem::Packing => truncate_packing(&graph.inner, &f, p),
    };
    match out {
        Ok(b) => Ok(b.values().to_vec()),
        Err(e @ TransformError::Assertion(_)) => Err(PyRuntimeError::new_err(e.to_string())),
        Err(e) => Err(input_err(e)),
    }
}

/// Builds a hardness instance. `source` is a clique instance in `p mcc`
/// format, or a weighted graph for `bi-wbi`. Returns a dict with the graph,
/// target, planted witness, constants, metadata text and self-checks.
#[pyfunction]
#[pyo3(signature = (reduction, source, scale = None, target = None, witness = None, normalize = false))]
fn gen<'py>(
    py: Python<'py>,
    reduction: &str,
    source: &str,
    scale: Option<f64>,
    target: Option<u64>,
    witness: Option<Vec<u64>>,
    normalize: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let kind: ReductionKind = reduction.parse().map_err(PyValueError::new_err)?;
    let inst = match kind {
        ReductionKind::WbiFromClique => gen_wbi_from_clique(&parse_clique_instance(source).map_err(input_err)?, scale),
        ReductionKind::WbpFromClique => gen_wbp_from_clique(&parse_clique_instance(source).map_err(input_err)?, scale),
        ReductionKind::BiFromWbi => {
            let g1 = parse_graph(source).map_err(input_err)?;
            let w = witness.map(Broadcast::from_values);
            if w.as_ref().is_some_and(|w| w.len() != g1.n()) {
                return Err(PyValueError::new_err("witness length differs from the source graph"));
            }
            gen_bi_from_wbi(&g1, target, w.as_ref(), normalize, scale)
        }
    }
    .map_err(input_err)?;
    let checks = py.detach(|| self_checks(&inst));
    let out = PyDict::new(py);
    out.set_item("reduction", inst.kind.name())?;
    out.set_item("problem", inst.problem().short_name())?;
    out.set_item("target", inst.target)?;
    out.set_item("scaled", inst.scaled)?;
    out.set_item("witness", inst.witness.as_ref().map(|w| w.values().to_vec()))?;
    let constants = PyDict::new(py);
    for (name, v) in &inst.constants {
        constants.set_item(*name, *v)?;
    }
    out.set_item("constants", constants)?;
    out.set_item("meta", inst.meta_text())?;
    out.set_item("checks", checks.into_iter().map(|c| (c.name, c.ok, c.detail)).collect::<Vec<_>>())?;
    out.set_item("graph", Py::new(py, PyGraph { inner: inst.graph })?)?;
    Ok(out)
}

#[pymodule]
fn bcast(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(approx, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(truncate, m)?)?;
    m.add_function(wrap_pyfunction!(gen, m)?)?;
    Ok(())
}
