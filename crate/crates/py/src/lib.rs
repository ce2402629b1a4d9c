//! Python bindings for `qaos-core`.
//!
//! Schedules cross the boundary as bit strings (`"0101"`, link 0 first) and
//! benchmark records as plain dicts.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qaos_core::bench::{self, Algorithm, ExperimentConfig, TrialRecord, VariantSummary};
use qaos_core::ising::compile_problem;
use qaos_core::mwis::{self, OptResult};
use qaos_core::optimizer::OptimizerConfig;
use qaos_core::simulator::{self, EnergyTable, QaoaParams};
use qaos_core::{Error, GraphGenConfig};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } | Error::Csv { .. } => PyOSError::new_err(e.to_string()),
        e if e.is_usage() => PyValueError::new_err(e.to_string()),
        Error::IndexOutOfRange { .. } | Error::LengthMismatch { .. } | Error::Capacity { .. } => {
            PyValueError::new_err(e.to_string())
        }
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Weighted conflict graph: one vertex per link, one edge per conflicting pair.
#[pyclass(name = "ConflictGraph", frozen)]
pub struct PyConflictGraph {
    inner: qaos_core::ConflictGraph,
}

#[pymethods]
impl PyConflictGraph {
    #[new]
    fn new(weights: Vec<u64>, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = qaos_core::ConflictGraph::new(weights, edges).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: qaos_core::ConflictGraph::from_json(text).map_err(to_py)? })
    }

    #[staticmethod]
    #[pyo3(signature = (n=10, edge_prob=0.3, weight_min=1, weight_max=10, seed=0))]
    fn random(n: usize, edge_prob: f64, weight_min: u64, weight_max: u64, seed: u64) -> PyResult<Self> {
        let cfg = GraphGenConfig { n, edge_prob, weight_min, weight_max, seed };
        Ok(Self { inner: qaos_core::generate_random_graph(&cfg).map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn weights(&self) -> Vec<u64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn neighbors(&self, i: usize) -> PyResult<Vec<usize>> {
        Ok(self.inner.neighbors(i).map_err(to_py)?.to_vec())
    }

    fn is_independent(&self, schedule: &str) -> PyResult<bool> {
        let s = parse_schedule(schedule)?;
        mwis::is_independent(&self.inner, &s).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("ConflictGraph(weights={:?}, edges={:?})", self.inner.weights(), self.inner.edges())
    }
}

fn parse_schedule(s: &str) -> PyResult<mwis::LinkSchedule> {
    s.parse().map_err(to_py)
}

fn solution(r: OptResult) -> (String, u64) {
    (r.schedule.to_string(), r.weight)
}

/// Exact maximum-weight independent set as `(schedule, weight)`.
#[pyfunction]
fn brute_force(graph: &PyConflictGraph) -> PyResult<(String, u64)> {
    Ok(solution(mwis::brute_force_mwis(&graph.inner).map_err(to_py)?))
}

#[pyfunction]
fn greedy(graph: &PyConflictGraph) -> (String, u64) {
    solution(mwis::greedy_mwis(&graph.inner))
}

#[pyfunction]
#[pyo3(signature = (graph, seed=0))]
fn random_maximal(graph: &PyConflictGraph, seed: u64) -> (String, u64) {
    solution(mwis::random_maximal_is(&graph.inner, seed))
}

/// Approximation ratio `alg_weight / opt_weight`.
#[pyfunction]
fn eta(alg_weight: u64, opt_weight: u64) -> PyResult<f64> {
    mwis::eta(alg_weight, opt_weight).map_err(to_py)
}

/// Problem Hamiltonian as text, one Pauli-Z term per line.
#[pyfunction]
#[pyo3(signature = (graph, rho=1.0))]
fn hamiltonian(graph: &PyConflictGraph, rho: f64) -> PyResult<String> {
    Ok(compile_problem(&graph.inner, rho).map_err(to_py)?.to_string())
}

/// Energy of every basis state, indexed little-endian.
#[pyfunction]
#[pyo3(signature = (graph, rho=1.0))]
fn diagonal_table(graph: &PyConflictGraph, rho: f64) -> PyResult<Vec<f64>> {
    qaos_core::ising::diagonal_table(&compile_problem(&graph.inner, rho).map_err(to_py)?).map_err(to_py)
}

fn prepare(table: Vec<f64>, gamma: Vec<f64>, beta: Vec<f64>) -> PyResult<(EnergyTable, simulator::StateVector)> {
    let table = EnergyTable::new(table).map_err(to_py)?;
    let params = QaoaParams::new(gamma, beta).map_err(to_py)?;
    let state = simulator::prepare_qaoa_state(&table, &params).map_err(to_py)?;
    Ok((table, state))
}

/// `<H>` of the depth-p circuit over an energy table.
#[pyfunction]
fn expectation(table: Vec<f64>, gamma: Vec<f64>, beta: Vec<f64>) -> PyResult<f64> {
    let (table, state) = prepare(table, gamma, beta)?;
    simulator::expectation(&state, &table).map_err(to_py)
}

/// Measurement distribution of the depth-p circuit.
#[pyfunction]
fn probabilities(table: Vec<f64>, gamma: Vec<f64>, beta: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(prepare(table, gamma, beta)?.1.probabilities())
}

#[pyfunction]
#[pyo3(signature = (graph, p=10, rho=1.0, shots=1000, epochs=200, learning_rate=0.05, seed=0))]
#[allow(clippy::too_many_arguments)]
fn solve_qaos<'py>(
    py: Python<'py>,
    graph: &PyConflictGraph,
    p: usize,
    rho: f64,
    shots: usize,
    epochs: usize,
    learning_rate: f64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = OptimizerConfig { epochs, learning_rate, ..Default::default() };
    let o = py.detach(|| bench::solve_qaos(&graph.inner, p, rho, shots, &cfg, seed)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("schedule", o.result.schedule.to_string())?;
    d.set_item("weight", o.result.weight)?;
    d.set_item("feasible_sample_fraction", o.feasible_sample_fraction)?;
    d.set_item("energy_best", o.optimization.energy_best)?;
    d.set_item("energy_initial", o.optimization.energy_initial)?;
    d.set_item("gamma", o.optimization.params_best.gamma().to_vec())?;
    d.set_item("beta", o.optimization.params_best.beta().to_vec())?;
    d.set_item("trace", o.optimization.trace)?;
    Ok(d)
}

fn record_dict<'py>(py: Python<'py>, r: &TrialRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("graph_id", r.graph_id)?;
    d.set_item("algorithm", r.algorithm.label())?;
    d.set_item("p", r.p)?;
    d.set_item("rho", r.rho)?;
    d.set_item("seed", r.seed)?;
    d.set_item("alg_weight", r.alg_weight)?;
    d.set_item("opt_weight", r.opt_weight)?;
    d.set_item("eta", r.eta)?;
    d.set_item("feasible_sample_fraction", r.feasible_sample_fraction)?;
    d.set_item("wall_time_ms", r.wall_time_ms)?;
    Ok(d)
}

fn summary_dict<'py>(py: Python<'py>, v: &VariantSummary) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("algorithm", v.algorithm.label())?;
    d.set_item("p", v.p)?;
    d.set_item("trials", v.trials)?;
    d.set_item("optimal_rate", v.optimal_rate)?;
    d.set_item("mean_eta", v.mean_eta)?;
    d.set_item("cdf", v.cdf.clone())?;
    Ok(d)
}

/// Runs a benchmark from a JSON experiment config.
///
/// Returns `{"records": [...], "summary": [...]}`.
#[pyfunction]
#[pyo3(signature = (config_json, workers=1))]
fn run_benchmark<'py>(py: Python<'py>, config_json: &str, workers: usize) -> PyResult<Bound<'py, PyDict>> {
    let cfg = ExperimentConfig::from_json(config_json).map_err(to_py)?;
    let (records, summary) = py
        .detach(|| {
            let records = bench::run_benchmark(&cfg, workers)?;
            let summary = bench::summarize(&records)?;
            Ok((records, summary))
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("records", records.iter().map(|r| record_dict(py, r)).collect::<PyResult<Vec<_>>>()?)?;
    d.set_item("summary", summary.variants.iter().map(|v| summary_dict(py, v)).collect::<PyResult<Vec<_>>>()?)?;
    Ok(d)
}

/// Names accepted wherever an algorithm is expected.
#[pyfunction]
fn algorithms() -> Vec<&'static str> {
    Algorithm::ALL.iter().map(|a| a.label()).collect()
}

#[pymodule]
pub fn qaos(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConflictGraph>()?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(greedy, m)?)?;
    m.add_function(wrap_pyfunction!(random_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_table, m)?)?;
    m.add_function(wrap_pyfunction!(expectation, m)?)?;
    m.add_function(wrap_pyfunction!(probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(solve_qaos, m)?)?;
    m.add_function(wrap_pyfunction!(run_benchmark, m)?)?;
    m.add_function(wrap_pyfunction!(algorithms, m)?)?;
    m.add("MAX_QUBITS", simulator::MAX_QUBITS)?;
    Ok(())
}
