// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! Python bindings: graphs, the classical oracles, the three deciders and a
//! few of the simulated primitives.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qforest::gadget::{self, GadgetVariant};
use qforest::search::{self, Constants, DeciderMode, Problem, ProblemDecider, Witness};
use qforest::sim::{amplify, spanu, walk};
use qforest::{oracles, span};

fn err(e: qforest::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Simple undirected graph on vertices `1..=n`.
#[pyclass(name = "Graph", module = "qforest", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: qforest::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: qforest::Graph::from_edges(n, &edges).map_err(err)?,
        })
    }

    /// Parses an `n m` edge list.
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: qforest::Graph::parse_edge_list(text).map_err(err)?,
        })
    }

    /// Reads an adjacency-array JSON document.
    #[staticmethod]
    fn from_array_json(text: &str) -> PyResult<Self> {
        let arr = qforest::AdjacencyArray::from_json(text).map_err(err)?;
        Ok(PyGraph {
            inner: arr.to_graph().map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.inner.has_edge(u, v)
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    fn to_array_json(&self) -> String {
        qforest::AdjacencyArray::from_graph(&self.inner).to_json()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot("G", |v| v.to_string())
    }

    /// Some cycle as a vertex list, or `None` for a forest.
    fn find_cycle(&self) -> Option<Vec<usize>> {
        oracles::has_cycle(&self.inner).map(|c| c.vertices)
    }

    /// `(True, colours)` with `colours[v-1]` in `{0, 1}`, or `(False, odd_cycle)`.
    fn bipartition(&self) -> (bool, Vec<usize>) {
        match oracles::is_bipartite(&self.inner) {
            Ok(colors) => (true, colors[1..].iter().map(|&c| usize::from(c)).collect()),
            Err(cycle) => (false, cycle.vertices),
        }
    }

    fn shortest_path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        oracles::shortest_path(&self.inner, s, t)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

/// Outcome of one decider run.
#[pyclass(name = "DecisionReport", module = "qforest", frozen)]
struct PyReport {
    inner: qforest::DecisionReport,
}

#[pymethods]
impl PyReport {
    /// `forest`, `has-cycle`, `bipartite` or `odd-cycle`.
    #[getter]
    fn verdict(&self) -> &'static str {
        match self.inner.verdict {
            search::Verdict::Forest => "forest",
            search::Verdict::HasCycle { .. } => "has-cycle",
            search::Verdict::Bipartite => "bipartite",
            search::Verdict::OddCycle { .. } => "odd-cycle",
        }
    }

    #[getter]
    fn holds(&self) -> bool {
        self.inner.verdict.holds()
    }

    /// Vertex the search found, for negative verdicts.
    #[getter]
    fn k(&self) -> Option<usize> {
        match self.inner.verdict {
            search::Verdict::HasCycle { k } | search::Verdict::OddCycle { k } => Some(k),
            _ => None,
        }
    }

    /// Cycle vertices for cycle witnesses.
    #[getter]
    fn witness_cycle(&self) -> Option<Vec<usize>> {
        match &self.inner.witness {
            Some(Witness::Cycle { cycle }) => Some(cycle.vertices.clone()),
            _ => None,
        }
    }

    #[getter]
    fn early_reject(&self) -> bool {
        self.inner.early_reject
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.counters.seed
    }

    /// `queries`, `grover_iterations`, `walk_steps` and `base_calls`.
    fn counters<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = &self.inner.counters;
        let d = PyDict::new(py);
        d.set_item("queries", c.queries)?;
        d.set_item("grover_iterations", c.grover_iterations)?;
        d.set_item("walk_steps", c.walk_steps)?;
        d.set_item("base_calls", c.base_calls)?;
        Ok(d)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("DecisionReport(verdict={:?}, seed={})", self.verdict(), self.seed())
    }
}

fn constants(overrides: Option<&Bound<'_, PyDict>>) -> PyResult<Constants> {
    let mut c = Constants::default();
    if let Some(d) = overrides {
        for (k, v) in d.iter() {
            c.set(&k.extract::<String>()?, v.extract::<f64>()?).map_err(err)?;
        }
    }
    Ok(c)
}

fn mode(sampled: bool) -> DeciderMode {
    if sampled {
        DeciderMode::Sampled
    } else {
        DeciderMode::Exact
    }
}

/// Decides whether `graph` is a forest in the `matrix` or `array` model.
#[pyfunction]
#[pyo3(signature = (graph, seed = 0, epsilon = 0.05, model = "matrix", constants = None, sampled = false))]
fn decide_forest(
    graph: &PyGraph,
    seed: u64,
    epsilon: f64,
    model: &str,
    constants: Option<&Bound<'_, PyDict>>,
    sampled: bool,
) -> PyResult<PyReport> {
    let c = self::constants(constants)?;
    let dec = match model {
        "matrix" => ProblemDecider::matrix(&graph.inner, Problem::Forest, &c, epsilon),
        "array" => ProblemDecider::array(&qforest::AdjacencyArray::from_graph(&graph.inner), &c, epsilon),
        other => return Err(PyValueError::new_err(format!("unknown model {other:?}"))),
    }
    .map_err(err)?;
    let inner = dec.with_mode(mode(sampled)).run(seed).map_err(err)?;
    Ok(PyReport { inner })
}

/// Decides whether `graph` is bipartite (matrix model).
#[pyfunction]
#[pyo3(signature = (graph, seed = 0, epsilon = 0.05, constants = None, sampled = false))]
fn decide_bipartite(
    graph: &PyGraph,
    seed: u64,
    epsilon: f64,
    constants: Option<&Bound<'_, PyDict>>,
    sampled: bool,
) -> PyResult<PyReport> {
    let c = self::constants(constants)?;
    let dec = ProblemDecider::matrix(&graph.inner, Problem::Bipartite, &c, epsilon).map_err(err)?;
    let inner = dec.with_mode(mode(sampled)).run(seed).map_err(err)?;
    Ok(PyReport { inner })
}

/// Eigenvalues of `Delta` for the s-t program on `n` vertices, with the gap
/// and the factorisation residual.
#[pyfunction]
#[pyo3(signature = (n, alpha = 2.0))]
fn delta_spectrum<'py>(py: Python<'py>, n: usize, alpha: f64) -> PyResult<Bound<'py, PyDict>> {
    let s = span::STProgram::new(n, 1, n, alpha)
        .and_then(|p| p.delta_spectrum())
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("eigenvalues", s.eigenvalues.clone())?;
    d.set_item("groups", s.grouped(1e-9))?;
    d.set_item("gap", s.gap())?;
    d.set_item("smallest_nonzero_singular", s.smallest_nonzero_singular)?;
    d.set_item("factorization_residual", s.factorization_residual)?;
    Ok(d)
}

/// Probability that the span-program algorithm accepts, for s-t
/// connectivity on `graph` with scaling `alpha` and phase cutoff `theta`.
#[pyfunction]
fn span_acceptance(graph: &PyGraph, s: usize, t: usize, alpha: f64, theta: f64) -> PyResult<f64> {
    let edges: Vec<(usize, usize)> = graph.inner.edges().collect();
    Ok(spanu::acceptance_reduced(graph.inner.n(), s, t, alpha, &edges, theta)
        .map_err(err)?
        .probability)
}

/// Zero-phase probability of the walk from `s` after `steps` applications
/// (`T = ceil(8 sqrt(d n))` when `steps` is omitted).
#[pyfunction]
#[pyo3(signature = (graph, s, t, d, weight = walk::DEFAULT_WALK_WEIGHT, steps = None))]
fn walk_zero_phase(graph: &PyGraph, s: usize, t: Option<usize>, d: usize, weight: f64, steps: Option<usize>) -> PyResult<f64> {
    let n = graph.inner.n();
    let w = walk::WalkSpace::new(graph.inner.clone(), s, t, weight, d, n).map_err(err)?;
    let steps = steps.unwrap_or_else(|| w.steps(walk::DEFAULT_C_W));
    Ok(walk::zero_phase_probability(&w, steps))
}

/// `(full_iterations, final_phases)` of exact amplification at success `1/d`.
#[pyfunction]
fn aa_schedule(d: usize) -> PyResult<(usize, Option<(f64, f64)>)> {
    let s = amplify::exact_aa_schedule(d).map_err(err)?;
    Ok((s.full, s.final_phases))
}

/// Parity gadget for the bit string `bits`; `variant` is `cycle-test` or
/// `bipartite-test`.
#[pyfunction]
#[pyo3(signature = (bits, variant = "cycle-test"))]
fn parity_gadget(bits: &str, variant: &str) -> PyResult<PyGraph> {
    let v = match variant {
        "cycle-test" => GadgetVariant::CycleTest,
        "bipartite-test" => GadgetVariant::BipartiteTest,
        other => return Err(PyValueError::new_err(format!("unknown variant {other:?}"))),
    };
    let x = gadget::parse_bits(bits).map_err(err)?;
    let arr = gadget::parity_gadget(&x, v).map_err(err)?;
    Ok(PyGraph {
        inner: arr.to_graph().map_err(err)?,
    })
}

#[pymodule]
#[pyo3(name = "qforest")]
fn qforest_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(decide_forest, m)?)?;
    m.add_function(wrap_pyfunction!(decide_bipartite, m)?)?;
    m.add_function(wrap_pyfunction!(delta_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(span_acceptance, m)?)?;
    m.add_function(wrap_pyfunction!(walk_zero_phase, m)?)?;
    m.add_function(wrap_pyfunction!(aa_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(parity_gadget, m)?)?;
    Ok(())
}
