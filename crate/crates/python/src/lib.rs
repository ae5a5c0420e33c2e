//! Python bindings. Structured results come back as plain dicts and lists decoded from the
//! same canonical JSON the CLI emits; rationals stay as `"p/q"` strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use crn_core::pathway;
use crn_core::rational::{self, Rational};
use crn_core::report::{self, AnalysisOptions, ProbeOptions};
use crn_core::{diffusive, siphon, Error, RationalMatrix, ReactionNetwork, SimulationParams};

fn err(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?
        .call_method1("loads", (report::to_canonical_json(value),))
}

fn rationals(values: Vec<String>) -> PyResult<Vec<Rational>> {
    values
        .iter()
        .map(|s| rational::parse_rational(s).map_err(err))
        .collect()
}

/// A parsed reaction network.
#[pyclass(module = "crn", frozen)]
struct Network {
    inner: ReactionNetwork,
}

#[pymethods]
impl Network {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: crn_core::parse_network(text).map_err(err)?,
        })
    }

    #[getter]
    fn species(&self) -> Vec<String> {
        self.inner.species_names()
    }

    #[getter]
    fn reactions(&self) -> Vec<String> {
        let names = self.inner.species_names();
        self.inner.reactions().iter().map(|r| r.render(&names)).collect()
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn is_reversible(&self) -> bool {
        self.inner.is_reversible()
    }

    fn is_weakly_reversible(&self) -> bool {
        self.inner.is_weakly_reversible()
    }

    fn is_consistent(&self) -> bool {
        self.inner.is_consistent().is_consistent()
    }

    fn is_conservative(&self) -> bool {
        self.inner.is_conservative()
    }

    /// Basis of conservation laws, each a list of `"p/q"` weights.
    fn conservation_laws<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.conservation_laws())
    }

    /// Minimal siphons as lists of species names.
    fn minimal_siphons(&self) -> Vec<Vec<String>> {
        siphon::minimal_siphons(&self.inner)
            .iter()
            .map(|s| self.inner.set_names(s))
            .collect()
    }

    /// Full classification of a comma-separated species set, with certificates.
    fn classify<'py>(&self, py: Python<'py>, species: &str) -> PyResult<Bound<'py, PyAny>> {
        let set = self.inner.species_set(species).map_err(err)?;
        to_py(py, &siphon::classify_set(&self.inner, &set).map_err(err)?)
    }

    /// Persistence certificate; raises if it fails its own verification.
    fn certify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let c = crn_core::certify(&self.inner).map_err(err)?;
        c.verify(&self.inner).map_err(PyRuntimeError::new_err)?;
        to_py(py, &c)
    }

    #[pyo3(signature = (source, target, bound = pathway::DEFAULT_BOUND))]
    fn reach<'py>(
        &self,
        py: Python<'py>,
        source: &str,
        target: &str,
        bound: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let s = self.inner.parse_complex(source).map_err(err)?;
        let t = self.inner.parse_complex(target).map_err(err)?;
        let v = pathway::bounded_reach(&self.inner, &s, &t, bound).map_err(err)?;
        if !v.verify(&self.inner, &s, &t) {
            return Err(PyRuntimeError::new_err("reachability verdict failed its own check"));
        }
        to_py(py, &v)
    }

    /// Mass-action trajectory. Rates and initial values accept `"p/q"`, integer or decimal strings.
    #[pyo3(signature = (rates, initial, t_end, sample_times = Vec::new()))]
    fn simulate(
        &self,
        rates: Vec<String>,
        initial: Vec<String>,
        t_end: f64,
        sample_times: Vec<f64>,
    ) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
        let p = SimulationParams::new(rationals(rates)?, rationals(initial)?, t_end)
            .with_sample_times(sample_times);
        let run = crn_core::simulate(&self.inner, &p).map_err(err)?;
        Ok((run.times, run.trajectory))
    }

    fn __repr__(&self) -> String {
        format!(
            "Network({} species, {} reactions)",
            self.inner.num_species(),
            self.inner.num_reactions()
        )
    }
}

/// Full analysis report as a dict.
#[pyfunction]
#[pyo3(signature = (text, catalysis = false, bound = pathway::DEFAULT_BOUND, probe = None, seed = 0, t_end = 50.0))]
fn analyze<'py>(
    py: Python<'py>,
    text: &str,
    catalysis: bool,
    bound: usize,
    probe: Option<usize>,
    seed: u64,
    t_end: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let options = AnalysisOptions {
        catalysis,
        bound,
        probe: probe.map(|trials| ProbeOptions { trials, t_end, seed }),
    };
    let r = report::analyze(text, &options).map_err(err)?;
    to_py(py, &r)
}

/// Re-checks every certificate in a report produced by `analyze`; returns the failure list.
#[pyfunction]
fn verify_report(report_json: &str) -> PyResult<Vec<String>> {
    let r: crn_core::AnalysisReport =
        serde_json::from_str(report_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(r.verify().failures)
}

/// Certified trichotomy for a diffusive matrix given as text rows.
#[pyfunction]
fn trichotomy<'py>(py: Python<'py>, matrix: &str) -> PyResult<Bound<'py, PyAny>> {
    let a = RationalMatrix::parse(matrix).map_err(err)?;
    let v = if diffusive::validate_strongly_diffusive(&a).map_err(err)? {
        diffusive::trichotomy(&a)
    } else {
        diffusive::classify_diffusive_general(&a)
    }
    .map_err(err)?;
    if !v.verify(&a) {
        return Err(PyRuntimeError::new_err("trichotomy certificate failed its own check"));
    }
    to_py(py, &v)
}

#[pymodule]
#[pyo3(name = "crn")]
fn crn_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Network>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(verify_report, m)?)?;
    m.add_function(wrap_pyfunction!(trichotomy, m)?)?;
    m.add("__version__", report::TOOL_VERSION)?;
    Ok(())
}
