//! Python bindings: `import qsd`.

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use qsd_core::bounds::{chernoff_matrix, multiple_chernoff};
use qsd_core::exponent::{run_exponent, state_forms, EpsPolicy};
use qsd_core::io::{ensemble_to_json, parse_ensemble};
use qsd_core::measurement::{self, validate_povm, weighted_forms};
use qsd_core::{ComplexMatrix, QsdError, WeightedState, DEFAULT_DIM_CAP};

type Rows = Vec<Vec<Complex64>>;

fn to_py(e: QsdError) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

fn matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(rows).map_err(to_py)
}

fn json_loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// A validated list of weighted states p_i ρ_i.
#[pyclass(module = "qsd", frozen)]
struct Ensemble {
    states: Vec<WeightedState>,
}

#[pymethods]
impl Ensemble {
    /// Builds an ensemble from priors and density matrices (lists of rows of complex numbers).
    #[new]
    #[pyo3(signature = (priors, matrices, unnormalized = false))]
    fn new(priors: Vec<f64>, matrices: Vec<Rows>, unnormalized: bool) -> PyResult<Self> {
        if priors.len() != matrices.len() {
            return Err(PyValueError::new_err("priors and matrices differ in length"));
        }
        let entries = priors
            .into_iter()
            .zip(matrices)
            .map(|(p, rows)| qsd_core::io::StateEntry {
                prior: p,
                matrix: rows.into_iter().map(|row| row.into_iter().map(|z| [z.re, z.im]).collect()).collect(),
                label: None,
            })
            .collect();
        let states = qsd_core::EnsembleFile { states: entries }.into_states(unnormalized).map_err(to_py)?;
        Ok(Self { states })
    }

    /// Parses the JSON ensemble format used by the `qsd` command.
    #[staticmethod]
    #[pyo3(signature = (text, unnormalized = false))]
    fn from_json(text: &str, unnormalized: bool) -> PyResult<Self> {
        Ok(Self { states: parse_ensemble(text, unnormalized).map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        ensemble_to_json(&self.states)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.states[0].dim()
    }

    #[getter]
    fn priors(&self) -> Vec<f64> {
        self.states.iter().map(WeightedState::prior).collect()
    }

    fn __len__(&self) -> usize {
        self.states.len()
    }

    fn __repr__(&self) -> String {
        format!("Ensemble(r={}, dim={})", self.states.len(), self.dim())
    }
}

/// The projective measurement built from the ensemble's eigenspaces.
#[pyclass(module = "qsd", frozen)]
struct Measurement {
    inner: measurement::ProjectiveMeasurement,
    t_max: usize,
}

#[pymethods]
impl Measurement {
    #[getter]
    fn eps(&self) -> f64 {
        self.inner.eps
    }

    #[getter]
    fn t_max(&self) -> usize {
        self.t_max
    }

    /// Outcome projectors; the residual space is folded into the last one.
    fn projectors(&self) -> Vec<Rows> {
        self.inner.projectors().iter().map(ComplexMatrix::rows).collect()
    }

    /// Σ_i tr A_i (I − Π_i) for the given ensemble.
    fn error(&self, ensemble: &Ensemble) -> f64 {
        let mats: Vec<ComplexMatrix> = ensemble.states.iter().map(WeightedState::weighted).collect();
        measurement::error_probability(&mats, &self.inner)
    }

    /// POVM residuals: completeness, max_cross, min_eigenvalue, idempotency.
    fn residuals(&self) -> PyResult<(f64, f64, f64, f64)> {
        let r = validate_povm(&self.inner.projectors()).map_err(to_py)?;
        Ok((r.completeness, r.max_cross, r.min_eigenvalue, r.idempotency))
    }

    fn __repr__(&self) -> String {
        format!("Measurement(outcomes={}, eps={})", self.inner.num_outcomes(), self.inner.eps)
    }
}

/// Eigenvalues (ascending) and eigenvectors (as columns) of a Hermitian matrix.
#[pyfunction]
fn herm_eig(m: Rows) -> PyResult<(Vec<f64>, Rows)> {
    let e = qsd_core::herm_eig(&matrix(m)?).map_err(to_py)?;
    Ok((e.eigenvalues.clone(), e.eigenvectors.rows()))
}

#[pyfunction]
fn tensor_product(a: Rows, b: Rows) -> PyResult<Rows> {
    Ok(qsd_core::tensor_product(&matrix(a)?, &matrix(b)?).map_err(to_py)?.rows())
}

#[pyfunction]
fn trace_norm(m: Rows) -> PyResult<f64> {
    qsd_core::trace_norm(&matrix(m)?).map_err(to_py)
}

/// Optimal two-outcome error (tr(A₁ + A₂) − ‖A₁ − A₂‖₁)/2 for weighted states.
#[pyfunction]
fn helstrom_error(a1: Rows, a2: Rows) -> PyResult<f64> {
    qsd_core::helstrom_error(&matrix(a1)?, &matrix(a2)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (ensemble, eps = None))]
fn build_measurement(ensemble: &Ensemble, eps: Option<f64>) -> PyResult<Measurement> {
    let forms = weighted_forms(&ensemble.states).map_err(to_py)?;
    let c = measurement::construct(&forms, eps).map_err(to_py)?;
    Ok(Measurement { inner: c.measurement, t_max: c.t_max })
}

/// The full bound report as a dict (infinities appear as the string "inf").
#[pyfunction]
fn bounds<'py>(py: Python<'py>, ensemble: &Ensemble) -> PyResult<Bound<'py, PyAny>> {
    let report = qsd_core::bound_report(&ensemble.states).map_err(to_py)?;
    json_loads(py, &serde_json::to_string(&report).expect("report serializes"))
}

/// Pairwise Chernoff distances and their minimum; orthogonal pairs give inf.
#[pyfunction]
fn chernoff(ensemble: &Ensemble) -> PyResult<(Vec<Vec<f64>>, f64)> {
    let forms = state_forms(&ensemble.states).map_err(to_py)?;
    Ok((chernoff_matrix(&forms), multiple_chernoff(&forms)))
}

/// CSV blocks of the n-copy exponent experiment, one per ε value.
#[pyfunction]
#[pyo3(signature = (ensemble, n_max, eps = "default", dim_cap = DEFAULT_DIM_CAP))]
fn exponent(ensemble: &Ensemble, n_max: usize, eps: &str, dim_cap: usize) -> PyResult<Vec<String>> {
    let policy: EpsPolicy = eps.parse().map_err(PyValueError::new_err)?;
    let reports = run_exponent(&ensemble.states, n_max, &policy, dim_cap).map_err(to_py)?;
    Ok(reports.iter().map(|r| r.to_csv()).collect())
}

/// Runs the seeded property suites; returns (passed, report text).
#[pyfunction]
#[pyo3(signature = (seed = 42))]
fn selftest(seed: u64) -> (bool, String) {
    let report = qsd_core::selftest::run_selftest(seed);
    (report.passed(), report.render())
}

#[pymodule]
fn qsd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ensemble>()?;
    m.add_class::<Measurement>()?;
    m.add_function(wrap_pyfunction!(herm_eig, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_product, m)?)?;
    m.add_function(wrap_pyfunction!(trace_norm, m)?)?;
    m.add_function(wrap_pyfunction!(helstrom_error, m)?)?;
    m.add_function(wrap_pyfunction!(build_measurement, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(chernoff, m)?)?;
    m.add_function(wrap_pyfunction!(exponent, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
