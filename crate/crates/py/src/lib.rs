//! Python bindings for `ghmst`.

use ghmst::filling;
use ghmst::gh::{self, Algorithm, GhResult};
use ghmst::partitions;
use ghmst::steiner::{self, SteinerInstance};
use ghmst::{Error, FiniteMetricSpace, SimplexSpec, WeightedTree};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(format!("{e:?}: {e}"))
}

/// A validated finite metric space.
#[pyclass(name = "MetricSpace", module = "ghmst_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct MetricSpace(FiniteMetricSpace);

#[pymethods]
impl MetricSpace {
    #[new]
    #[pyo3(signature = (matrix, labels = None))]
    fn new(matrix: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let space = match labels {
            Some(l) => FiniteMetricSpace::new(l, &matrix),
            None => FiniteMetricSpace::from_matrix(&matrix),
        };
        space.map(MetricSpace).map_err(err)
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<f64>> {
        self.0.matrix()
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn __len__(&self) -> usize {
        self.0.size()
    }

    fn d(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.0.size();
        for index in [i, j] {
            if index >= n {
                return Err(err(Error::IndexOutOfRange { index, size: n }));
            }
        }
        Ok(self.0.d(i, j))
    }

    fn diameter(&self) -> f64 {
        ghmst::diameter(&self.0)
    }

    fn scale(&self, lambda: f64) -> PyResult<Self> {
        ghmst::scale(&self.0, lambda).map(MetricSpace).map_err(err)
    }

    fn subspace(&self, indices: Vec<usize>) -> PyResult<Self> {
        self.0.subspace(&indices).map(MetricSpace).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("MetricSpace(size={}, labels={:?})", self.0.size(), self.0.labels())
    }
}

fn parse_algorithm(name: &str) -> PyResult<Algorithm> {
    match name {
        "exhaustive" => Ok(Algorithm::Exhaustive),
        "bnb" | "branch_and_bound" => Ok(Algorithm::BranchAndBound),
        other => Err(PyValueError::new_err(format!("unknown algorithm {other:?}"))),
    }
}

fn tree_dict<'py>(py: Python<'py>, t: &WeightedTree) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("vertices", t.vertices.clone())?;
    let edges: Vec<(usize, usize, f64)> = t.edges.iter().map(|e| (e.u, e.v, e.length)).collect();
    out.set_item("edges", edges)?;
    out.set_item("length", t.total_length)?;
    Ok(out)
}

fn gh_dict<'py>(py: Python<'py>, r: &GhResult) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("distance", r.distance)?;
    out.set_item("witness", r.witness.pairs().to_vec())?;
    out.set_item("method", r.method.as_str())?;
    out.set_item("nodes_explored", r.nodes_explored)?;
    Ok(out)
}

/// `lambda * Delta_n`: `n` points, all pairwise distances `lambda`.
#[pyfunction]
fn simplex(n: usize, lambda: f64) -> PyResult<MetricSpace> {
    SimplexSpec::new(n, lambda).map(|s| MetricSpace(ghmst::simplex(s))).map_err(err)
}

#[pyfunction]
fn minimum_spanning_tree<'py>(py: Python<'py>, x: &MetricSpace) -> PyResult<Bound<'py, PyDict>> {
    tree_dict(py, &ghmst::minimum_spanning_tree(&x.0))
}

#[pyfunction]
fn mst_length(x: &MetricSpace) -> f64 {
    ghmst::mst_length(&x.0)
}

/// MST edge lengths, longest first.
#[pyfunction]
fn mst_spectrum(x: &MetricSpace) -> Vec<f64> {
    ghmst::mst_spectrum(&x.0).0
}

/// `sigma_k` as a max over partitions into `k + 1` blocks; all of them if `k` is omitted.
#[pyfunction]
#[pyo3(signature = (x, k = None))]
fn spectrum_via_partitions(x: &MetricSpace, k: Option<usize>) -> PyResult<Vec<f64>> {
    match k {
        Some(k) => partitions::spectrum_via_partitions(&x.0, k).map(|v| vec![v]),
        None => partitions::spectrum_vector_via_partitions(&x.0, &ghmst::Limits::default()),
    }
    .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (x, y, algorithm = "bnb"))]
fn gh_exact<'py>(
    py: Python<'py>,
    x: &MetricSpace,
    y: &MetricSpace,
    algorithm: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let alg = parse_algorithm(algorithm)?;
    let r = py.detach(|| gh::gh_exact(&x.0, &y.0, alg)).map_err(err)?;
    gh_dict(py, &r)
}

#[pyfunction]
fn gh_to_simplex<'py>(py: Python<'py>, x: &MetricSpace, m: usize, lambda: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = py.detach(|| gh::gh_to_simplex(&x.0, m, lambda)).map_err(err)?;
    gh_dict(py, &r)
}

#[pyfunction]
fn spectrum_via_gh(x: &MetricSpace, lambda: f64) -> PyResult<Vec<f64>> {
    gh::spectrum_via_gh(&x.0, lambda).map(|s| s.0).map_err(err)
}

#[pyfunction]
fn mst_length_via_gh(x: &MetricSpace, lambda: f64) -> PyResult<f64> {
    gh::mst_length_via_gh(&x.0, lambda).map_err(err)
}

fn instance(x: &MetricSpace, terminals: Vec<String>) -> PyResult<SteinerInstance> {
    let labels: Vec<&str> = terminals.iter().map(String::as_str).collect();
    SteinerInstance::from_labels(x.0.clone(), &labels).map_err(err)
}

/// Steiner tree for the labelled terminals inside `x`, by subset enumeration.
#[pyfunction]
fn smt<'py>(py: Python<'py>, x: &MetricSpace, terminals: Vec<String>) -> PyResult<Bound<'py, PyDict>> {
    let inst = instance(x, terminals)?;
    let r = py.detach(|| steiner::smt_finite_ambient(&inst));
    let out = tree_dict(py, &r.tree)?;
    out.set_item("length", r.length)?;
    out.set_item("vertex_set", r.vertex_set.indices.clone())?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (x, terminals, d = None, lambda = None))]
fn smt_via_gh(x: &MetricSpace, terminals: Vec<String>, d: Option<f64>, lambda: Option<f64>) -> PyResult<f64> {
    let inst = instance(x, terminals)?;
    steiner::smt_via_gh(&inst, d, lambda).map_err(err)
}

/// Minimal filling length, its topology edges and edge weights.
#[pyfunction]
fn mf<'py>(py: Python<'py>, m: &MetricSpace) -> PyResult<Bound<'py, PyDict>> {
    let r = py.detach(|| filling::mf(&m.0)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("length", r.length)?;
    out.set_item("edges", r.topology.edges.clone())?;
    out.set_item("weights", r.weights)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (m, iterations = 2000, seed = 0, d = None))]
fn mf_upper_bound_search<'py>(
    py: Python<'py>,
    m: &MetricSpace,
    iterations: usize,
    seed: u64,
    d: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = py.detach(|| filling::mf_upper_bound_search(&m.0, d, iterations, seed)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("value", r.value)?;
    out.set_item("mst_value", r.mst_value)?;
    out.set_item("extension", MetricSpace(r.extension))?;
    out.set_item("d", r.d)?;
    out.set_item("lambda", r.lambda)?;
    Ok(out)
}

#[pymodule]
fn ghmst_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<MetricSpace>()?;
    m.add_function(wrap_pyfunction!(simplex, m)?)?;
    m.add_function(wrap_pyfunction!(minimum_spanning_tree, m)?)?;
    m.add_function(wrap_pyfunction!(mst_length, m)?)?;
    m.add_function(wrap_pyfunction!(mst_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_via_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(gh_exact, m)?)?;
    m.add_function(wrap_pyfunction!(gh_to_simplex, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_via_gh, m)?)?;
    m.add_function(wrap_pyfunction!(mst_length_via_gh, m)?)?;
    m.add_function(wrap_pyfunction!(smt, m)?)?;
    m.add_function(wrap_pyfunction!(smt_via_gh, m)?)?;
    m.add_function(wrap_pyfunction!(mf, m)?)?;
    m.add_function(wrap_pyfunction!(mf_upper_bound_search, m)?)?;
    Ok(())
}
