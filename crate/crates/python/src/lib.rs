//! Python bindings: `import pytwc`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use twc::analysis;
use twc::centrality::CentralityResult as CoreResult;
use twc::linegraph;
use twc::pipeline;
use twc::streamwalk;
use twc::tempgraph::{ingest, IngestOptions};
use twc::{Method, Mode, PipelineOptions, TwcError, WeightConfig, WeightFunction};

fn to_py(e: TwcError) -> PyErr {
    match e {
        TwcError::Io(io) => PyOSError::new_err(io.to_string()),
        TwcError::Divergence(_) | TwcError::Capacity(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = TwcError>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn options(delta: u64, undirected: bool, interval: Option<(u64, u64)>) -> IngestOptions {
    IngestOptions {
        undirected,
        delta,
        interval,
    }
}

/// A temporal graph with labeled nodes and a global transition time.
#[pyclass(name = "TemporalGraph", module = "pytwc", frozen)]
struct PyTemporalGraph {
    inner: twc::TemporalGraph,
    self_loops_dropped: usize,
}

#[pymethods]
impl PyTemporalGraph {
    /// Builds a graph from `(src, dst, t)` tuples. Labels must not contain whitespace.
    #[staticmethod]
    #[pyo3(signature = (edges, delta = 1, undirected = false, interval = None))]
    fn from_edges(edges: Vec<(String, String, u64)>, delta: u64, undirected: bool, interval: Option<(u64, u64)>) -> PyResult<Self> {
        let mut text = String::new();
        for (s, d, t) in &edges {
            if s.is_empty() || d.is_empty() || s.contains(char::is_whitespace) || d.contains(char::is_whitespace) {
                return Err(PyValueError::new_err(format!("invalid node label in edge ({s:?}, {d:?}, {t})")));
            }
            text.push_str(&format!("{s} {d} {t}\n"));
        }
        let (inner, w) = ingest(text.as_bytes(), &options(delta, undirected, interval)).map_err(to_py)?;
        Ok(PyTemporalGraph {
            inner,
            self_loops_dropped: w.self_loops_dropped,
        })
    }

    /// Reads a whitespace-separated `src dst t` edge list.
    #[staticmethod]
    #[pyo3(signature = (path, delta = 1, undirected = false, interval = None))]
    fn from_file(path: &str, delta: u64, undirected: bool, interval: Option<(u64, u64)>) -> PyResult<Self> {
        let file = File::open(path).map_err(|e| to_py(e.into()))?;
        let (inner, w) = ingest(BufReader::new(file), &options(delta, undirected, interval)).map_err(to_py)?;
        Ok(PyTemporalGraph {
            inner,
            self_loops_dropped: w.self_loops_dropped,
        })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn delta(&self) -> u64 {
        self.inner.delta()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    /// Edges as `(src, dst, t)` label tuples, sorted by time.
    fn edges(&self) -> Vec<(String, String, u64)> {
        let g = &self.inner;
        g.edges()
            .iter()
            .map(|e| (g.label(e.src).to_owned(), g.label(e.dst).to_owned(), e.t))
            .collect()
    }

    fn stats(&self) -> BTreeMap<&'static str, usize> {
        let s = self.inner.stats();
        BTreeMap::from([
            ("n", s.n),
            ("m", s.m),
            ("time_support", s.time_support),
            ("tau_in_max", s.tau_in_max),
            ("tau_out_max", s.tau_out_max),
        ])
    }

    fn __len__(&self) -> usize {
        self.inner.edge_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "TemporalGraph(nodes={}, edges={}, delta={})",
            self.inner.node_count(),
            self.inner.edge_count(),
            self.inner.delta()
        )
    }
}

/// Per-node scores of one centrality run.
#[pyclass(name = "Centrality", module = "pytwc", frozen)]
struct PyCentrality {
    inner: CoreResult,
    labels: Vec<String>,
}

#[pymethods]
impl PyCentrality {
    #[getter]
    fn mode(&self) -> String {
        match self.inner.mode {
            Mode::Twc => "twc",
            Mode::Katz => "katz",
            Mode::DegreeIn => "degree-in",
            Mode::DegreeOut => "degree-out",
        }
        .to_owned()
    }

    /// Label to score.
    fn scores(&self) -> BTreeMap<String, f64> {
        self.inner
            .nodes()
            .iter()
            .zip(self.inner.scores())
            .map(|(v, s)| (self.labels[v.index()].clone(), *s))
            .collect()
    }

    /// `(rank, label, score)` rows, best first, with competition ranks for ties.
    fn ranked(&self) -> Vec<(usize, String, f64)> {
        self.inner
            .ranked()
            .into_iter()
            .map(|(r, v, s)| (r, self.labels[v.index()].clone(), s))
            .collect()
    }

    /// The `ceil(n * fraction)` best nodes.
    fn top(&self, fraction: f64) -> PyResult<Self> {
        Ok(PyCentrality {
            inner: analysis::top_k(&self.inner, fraction).map_err(to_py)?,
            labels: self.labels.clone(),
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Temporal walk centrality (or a special case selected by `mode`).
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (graph, phi = "one", phi_m = "one", method = "auto", mode = "twc", epsilon = 1e-9, max_length = None))]
fn centrality(
    py: Python<'_>,
    graph: &PyTemporalGraph,
    phi: &str,
    phi_m: &str,
    method: &str,
    mode: &str,
    epsilon: f64,
    max_length: Option<usize>,
) -> PyResult<PyCentrality> {
    let config = WeightConfig::symmetric(parse(phi)?, parse(phi_m)?);
    let mut opts = PipelineOptions::with_method(parse::<Method>(method)?);
    opts.approx.epsilon = epsilon;
    opts.max_length = max_length;
    let mode: Mode = parse(mode)?;
    let g = &graph.inner;
    let (inner, _) = py
        .detach(|| pipeline::compute(g, &config, mode, &opts))
        .map_err(to_py)?;
    Ok(PyCentrality {
        inner,
        labels: g.labels().to_vec(),
    })
}

/// Streaming walk weights: label to `[(t, weight), ...]` ascending in `t`.
#[pyfunction]
#[pyo3(signature = (graph, direction = "in", phi = "one"))]
fn walk_weights(graph: &PyTemporalGraph, direction: &str, phi: &str) -> PyResult<BTreeMap<String, Vec<(u64, f64)>>> {
    let phi: WeightFunction = parse(phi)?;
    let g = &graph.inner;
    let m = match direction {
        "in" => streamwalk::compute_incoming(g, &phi),
        "out" => streamwalk::compute_outgoing(g, &phi),
        _ => return Err(PyValueError::new_err("direction must be 'in' or 'out'")),
    }
    .map_err(to_py)?;
    Ok(g.labels()
        .iter()
        .zip(m.rows())
        .map(|(l, row)| (l.clone(), row.clone()))
        .collect())
}

/// Directed line graph of a temporal graph.
#[pyclass(name = "LineGraph", module = "pytwc", frozen)]
struct PyLineGraph {
    inner: twc::DirectedLineGraph,
    labels: Vec<String>,
}

#[pymethods]
impl PyLineGraph {
    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn arc_count(&self) -> usize {
        self.inner.arc_count()
    }

    /// `(from, to, weight)` arcs between edge indices.
    fn arcs(&self) -> Vec<(usize, usize, f64)> {
        self.inner.arcs().collect()
    }

    fn is_acyclic(&self) -> bool {
        self.inner.is_acyclic()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot(&self.labels)
    }
}

#[pyfunction]
#[pyo3(signature = (graph, phi = "one"))]
fn line_graph(graph: &PyTemporalGraph, phi: &str) -> PyResult<PyLineGraph> {
    let phi: WeightFunction = parse(phi)?;
    Ok(PyLineGraph {
        inner: linegraph::expand(&graph.inner, &phi),
        labels: graph.inner.labels().to_vec(),
    })
}

/// Kendall tau-b between two aligned score lists; NaN when either is constant.
#[pyfunction]
fn kendall_tau(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
    if a.len() != b.len() {
        return Err(PyValueError::new_err("score lists differ in length"));
    }
    Ok(analysis::kendall_tau_b(&a, &b).tau)
}

/// Mean relative error of `approx` against `exact` over nodes with nonzero exact score.
#[pyfunction]
fn mean_relative_error(exact: &PyCentrality, approx: &PyCentrality) -> PyResult<f64> {
    Ok(analysis::mean_relative_error(&exact.inner, &approx.inner)
        .map_err(to_py)?
        .mean_relative_error)
}

#[pymodule]
fn pytwc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTemporalGraph>()?;
    m.add_class::<PyCentrality>()?;
    m.add_class::<PyLineGraph>()?;
    m.add_function(wrap_pyfunction!(centrality, m)?)?;
    m.add_function(wrap_pyfunction!(walk_weights, m)?)?;
    m.add_function(wrap_pyfunction!(line_graph, m)?)?;
    m.add_function(wrap_pyfunction!(kendall_tau, m)?)?;
    m.add_function(wrap_pyfunction!(mean_relative_error, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
