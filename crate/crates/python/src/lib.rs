use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use divergence_core::io::{format_f64, measure_to_json, parse_measure, trace_csv};
use divergence_core::suites::{run_suite as run_core_suite, SuiteContext};
use divergence_core::{
    Cell, CertifiedEstimate, Error, ExtendedReal, Family, Interval, OrderParam, ProbabilityMeasure, QuadratureConfig,
    RefinementConfig, SplitStrategy,
};

fn py_err(e: Error) -> PyErr {
    let msg = format!("{}: {e}", e.kind());
    if e.is_numerical() {
        PyArithmeticError::new_err(msg)
    } else {
        PyValueError::new_err(msg)
    }
}

fn order_param(family: &str, order: Option<f64>) -> PyResult<OrderParam> {
    let family: Family = family.parse().map_err(py_err)?;
    OrderParam::new(family, order).map_err(py_err)
}

fn quadrature(abs_tol: Option<f64>) -> PyResult<QuadratureConfig> {
    match abs_tol {
        Some(t) => QuadratureConfig::default().with_abs_tol(t).map_err(py_err),
        None => Ok(QuadratureConfig::default()),
    }
}

/// A cell is `(lo, hi)`, a list of such pairs, or a list of atom labels.
fn cell_from_py(obj: &Bound<'_, PyAny>) -> PyResult<Cell> {
    if let Ok((lo, hi)) = obj.extract::<(f64, f64)>() {
        return Ok(Cell::interval(lo, hi));
    }
    if let Ok(ivs) = obj.extract::<Vec<(f64, f64)>>() {
        return Ok(Cell::Intervals(ivs.into_iter().map(|(lo, hi)| Interval::new(lo, hi)).collect()));
    }
    if let Ok(labels) = obj.extract::<Vec<String>>() {
        return Ok(Cell::Atoms(labels));
    }
    Err(PyValueError::new_err("a cell is (lo, hi), a list of (lo, hi) or a list of atom labels"))
}

fn cell_to_py(py: Python<'_>, cell: &Cell) -> PyResult<Py<PyAny>> {
    Ok(match cell {
        Cell::Intervals(ivs) => ivs.iter().map(|iv| (iv.lo, iv.hi)).collect::<Vec<_>>().into_pyobject(py)?.into_any().unbind(),
        Cell::Atoms(ls) => ls.clone().into_pyobject(py)?.into_any().unbind(),
    })
}

/// Probability measure on a finite set of atoms or a finite union of intervals.
#[pyclass(name = "Measure", module = "divergence", frozen)]
struct PyMeasure {
    inner: ProbabilityMeasure,
}

#[pymethods]
impl PyMeasure {
    /// Point masses from `[(label, mass), ...]`.
    #[staticmethod]
    fn discrete(atoms: Vec<(String, f64)>) -> PyResult<Self> {
        ProbabilityMeasure::discrete(&atoms).map(|inner| PyMeasure { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn uniform(lo: f64, hi: f64) -> PyResult<Self> {
        ProbabilityMeasure::uniform(lo, hi).map(|inner| PyMeasure { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn beta(a: u32, b: u32) -> PyResult<Self> {
        ProbabilityMeasure::beta(a, b).map(|inner| PyMeasure { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn gaussian(mean: f64, sd: f64, lo: f64, hi: f64) -> PyResult<Self> {
        ProbabilityMeasure::truncated_gaussian(mean, sd, Interval::new(lo, hi))
            .map(|inner| PyMeasure { inner })
            .map_err(py_err)
    }

    /// Piecewise-polynomial density; coefficients in ascending degree.
    #[staticmethod]
    fn piecewise(support: Vec<(f64, f64)>, pieces: Vec<((f64, f64), Vec<f64>)>) -> PyResult<Self> {
        let support = support.into_iter().map(|(lo, hi)| Interval::new(lo, hi)).collect();
        let pieces = pieces
            .into_iter()
            .map(|((lo, hi), c)| (Interval::new(lo, hi), c))
            .collect();
        ProbabilityMeasure::piecewise(support, pieces)
            .map(|inner| PyMeasure { inner })
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_measure(text).map(|inner| PyMeasure { inner }).map_err(py_err)
    }

    fn to_json(&self) -> String {
        measure_to_json(&self.inner).to_json()
    }

    #[getter]
    fn is_discrete(&self) -> bool {
        self.inner.is_discrete()
    }

    fn total_mass(&self) -> f64 {
        self.inner.total_mass()
    }

    fn mass(&self, cell: &Bound<'_, PyAny>) -> PyResult<f64> {
        divergence_core::cell_mass(&self.inner, &cell_from_py(cell)?).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Measure({})", self.to_json())
    }
}

/// Result of the partition-refinement search.
#[pyclass(name = "Estimate", module = "divergence", frozen)]
struct PyEstimate {
    inner: CertifiedEstimate,
}

#[pymethods]
impl PyEstimate {
    #[getter]
    fn lower_bound(&self) -> f64 {
        self.inner.lower_bound.to_f64()
    }

    #[getter]
    fn oracle(&self) -> f64 {
        self.inner.oracle.to_f64()
    }

    #[getter]
    fn gap(&self) -> f64 {
        self.inner.gap
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn cells(&self) -> usize {
        self.inner.cells()
    }

    #[getter]
    fn stop_reason(&self) -> &'static str {
        self.inner.stop_reason.as_str()
    }

    #[getter]
    fn witness(&self, py: Python<'_>) -> PyResult<Option<Py<PyAny>>> {
        self.inner.witness.as_ref().map(|w| cell_to_py(py, w)).transpose()
    }

    /// `(step, cells, partition_value, oracle_value, gap)` per step.
    #[getter]
    fn trace(&self) -> Vec<(usize, usize, f64, f64, f64)> {
        self.inner
            .trace
            .steps
            .iter()
            .map(|s| (s.step, s.cells, s.partition_value.to_f64(), s.oracle_value.to_f64(), s.gap))
            .collect()
    }

    fn trace_csv(&self) -> String {
        trace_csv(&self.inner.trace)
    }

    fn __repr__(&self) -> String {
        format!(
            "Estimate(lower_bound={}, oracle={}, gap={}, cells={}, stop_reason={:?})",
            format_f64(self.lower_bound()),
            format_f64(self.oracle()),
            format_f64(self.inner.gap),
            self.inner.cells(),
            self.inner.stop_reason.as_str()
        )
    }
}

/// Divergence of `p` from `r`; `family` is "kl", "renyi" or "tsallis".
#[pyfunction]
#[pyo3(name = "divergence", signature = (p, r, family = "kl", order = None, abs_tol = None))]
fn py_divergence(p: &PyMeasure, r: &PyMeasure, family: &str, order: Option<f64>, abs_tol: Option<f64>) -> PyResult<f64> {
    let order = order_param(family, order)?;
    divergence_core::divergence(&p.inner, &r.inner, &order, &quadrature(abs_tol)?)
        .map(ExtendedReal::to_f64)
        .map_err(py_err)
}

/// Entropy of `p` with respect to its own reference measure.
#[pyfunction]
#[pyo3(signature = (p, family = "kl", order = None, abs_tol = None))]
fn entropy(p: &PyMeasure, family: &str, order: Option<f64>, abs_tol: Option<f64>) -> PyResult<f64> {
    let order = order_param(family, order)?;
    divergence_core::entropy(&p.inner, &order, &quadrature(abs_tol)?)
        .map(ExtendedReal::to_f64)
        .map_err(py_err)
}

#[pyfunction]
fn renyi_to_tsallis(value: f64, q: f64) -> PyResult<f64> {
    divergence_core::renyi_to_tsallis(ExtendedReal::from_f64(value), q)
        .map(ExtendedReal::to_f64)
        .map_err(py_err)
}

#[pyfunction]
fn tsallis_to_renyi(value: f64, q: f64) -> PyResult<f64> {
    divergence_core::tsallis_to_renyi(ExtendedReal::from_f64(value), q)
        .map(ExtendedReal::to_f64)
        .map_err(py_err)
}

/// Greedy partition refinement towards the divergence.
#[pyfunction]
#[pyo3(signature = (p, r, family = "kl", order = None, max_cells = 4096, tol = 1e-4, strategy = "phi-level"))]
fn supremum_estimate(
    p: &PyMeasure,
    r: &PyMeasure,
    family: &str,
    order: Option<f64>,
    max_cells: usize,
    tol: f64,
    strategy: &str,
) -> PyResult<PyEstimate> {
    let order = order_param(family, order)?;
    let cfg = RefinementConfig {
        max_cells,
        rel_gap_tol: tol,
        split_strategy: strategy.parse::<SplitStrategy>().map_err(py_err)?,
        ..RefinementConfig::default()
    };
    divergence_core::supremum_estimate(&p.inner, &r.inner, &order, &cfg)
        .map(|inner| PyEstimate { inner })
        .map_err(py_err)
}

/// Levels and R-masses of the dyadic quantization of `dP/dR` at depth `n`.
#[pyfunction]
fn quantize(p: &PyMeasure, r: &PyMeasure, n: u32) -> PyResult<Vec<(f64, f64)>> {
    let phi = divergence_core::rn_derivative(&p.inner, &r.inner).map_err(py_err)?;
    let s = divergence_core::quantize_rn_derivative(&phi, n).map_err(py_err)?;
    let induced = divergence_core::induced_measure(&s, &r.inner).map_err(py_err)?;
    Ok(s.levels().iter().copied().zip(induced.cell_r_masses().iter().copied()).collect())
}

/// Rényi divergence of the depth-`n` quantization.
#[pyfunction]
fn simple_divergence(p: &PyMeasure, r: &PyMeasure, n: u32, alpha: f64) -> PyResult<f64> {
    let phi = divergence_core::rn_derivative(&p.inner, &r.inner).map_err(py_err)?;
    let s = divergence_core::quantize_rn_derivative(&phi, n).map_err(py_err)?;
    divergence_core::simple_divergence(&s, &r.inner, alpha)
        .map(ExtendedReal::to_f64)
        .map_err(py_err)
}

/// Runs one named property suite and returns its JSON report.
#[pyfunction]
#[pyo3(signature = (name, seed = 42))]
fn run_suite(name: &str, seed: u64) -> PyResult<String> {
    run_core_suite(name, &SuiteContext::new(seed))
        .map(|r| r.to_json().to_json())
        .map_err(py_err)
}

#[pymodule]
#[pyo3(name = "divergence")]
fn divergence_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMeasure>()?;
    m.add_class::<PyEstimate>()?;
    m.add_function(wrap_pyfunction!(py_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_to_tsallis, m)?)?;
    m.add_function(wrap_pyfunction!(tsallis_to_renyi, m)?)?;
    m.add_function(wrap_pyfunction!(supremum_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(quantize, m)?)?;
    m.add_function(wrap_pyfunction!(simple_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
