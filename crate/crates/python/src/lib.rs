//! Python bindings: `import pytrigseries`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use trigseries::coefficients::TailRule;
use trigseries::diagnostics::analyze_trace;
use trigseries::quadrature::{self, IntervalUnion, NormTrace, QuadSettings, ResidualSettings, TraceKind};
use trigseries::{exceptional, extrema, kernels, partial_sums};

fn err(e: trigseries::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_set(set: &str) -> PyResult<IntervalUnion> {
    set.parse().map_err(err)
}

/// A convex coefficient sequence: explicit head plus a tail rule.
#[pyclass(name = "ConvexSequence", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySequence {
    inner: trigseries::ConvexSequence,
}

#[pymethods]
impl PySequence {
    #[new]
    fn new(head: Vec<f64>, tail: &str) -> PyResult<Self> {
        let tail: TailRule = tail.parse().map_err(err)?;
        let inner = trigseries::ConvexSequence::custom(head, tail).map_err(err)?;
        Ok(PySequence { inner })
    }

    /// `a_n = 1/ln n`
    #[staticmethod]
    fn log_reciprocal() -> Self {
        PySequence {
            inner: trigseries::ConvexSequence::log_reciprocal(),
        }
    }

    /// `a_n = 1/(ln n)²`
    #[staticmethod]
    fn log_squared_reciprocal() -> Self {
        PySequence {
            inner: trigseries::ConvexSequence::log_squared_reciprocal(),
        }
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PySequence {
            inner: trigseries::ConvexSequence::parse(text).map_err(err)?,
        })
    }

    fn value(&self, n: usize) -> f64 {
        self.inner.value(n)
    }

    fn values(&self, n: usize) -> Vec<f64> {
        self.inner.values(n)
    }

    #[getter]
    fn tail(&self) -> &'static str {
        self.inner.tail().keyword()
    }

    fn partial_sum(&self, n: usize, t: f64) -> f64 {
        partial_sums::partial_sum(&self.inner, n, t)
    }

    fn partial_sum_grid(&self, n: usize, grid_size: usize) -> PyResult<Vec<f64>> {
        partial_sums::partial_sum_grid(&self.inner, n, grid_size).map_err(err)
    }

    /// `(value, tail_bound)` of the Fejér representation truncated at `j_max`.
    fn f(&self, t: f64, j_max: usize) -> PyResult<(f64, f64)> {
        let v = partial_sums::fejer_representation(&self.inner, j_max, t).map_err(err)?;
        Ok((v.value, v.tail_bound))
    }

    fn __repr__(&self) -> String {
        format!("ConvexSequence(head={:?}, tail={:?})", self.inner.head(), self.tail())
    }
}

#[pyfunction]
fn dirichlet(n: usize, t: f64) -> f64 {
    kernels::dirichlet(n, t)
}

#[pyfunction]
fn fejer(j: usize, t: f64) -> f64 {
    kernels::fejer(j, t)
}

/// `(value, error_estimate)` of `∫_E |S_N|`.
#[pyfunction]
#[pyo3(signature = (seq, n, set = "torus", panels_per_cell = 1, nodes_per_panel = 16))]
fn integrate_abs_partial_sum(
    seq: &PySequence,
    n: usize,
    set: &str,
    panels_per_cell: usize,
    nodes_per_panel: usize,
) -> PyResult<(f64, f64)> {
    let settings = QuadSettings {
        panels_per_cell,
        nodes_per_panel,
    };
    let q = quadrature::integrate_abs_partial_sum(&seq.inner, n, &parse_set(set)?, &settings)
        .map_err(err)?;
    Ok((q.value, q.error_estimate))
}

/// `(value, error_estimate)` of `∫_E S_N`.
#[pyfunction]
#[pyo3(signature = (seq, n, set = "torus"))]
fn integrate_signed(seq: &PySequence, n: usize, set: &str) -> PyResult<(f64, f64)> {
    let q = quadrature::integrate_signed(&seq.inner, n, &parse_set(set)?, &QuadSettings::default())
        .map_err(err)?;
    Ok((q.value, q.error_estimate))
}

/// List of `(N, value, error)`; `kind` is `"abs"` or `"residual"`.
#[pyfunction]
#[pyo3(signature = (seq, ns, set = "torus", kind = "abs", eta = 1e-3, j_max = 100_000, grid_size = 1 << 18))]
fn norm_trace(
    seq: &PySequence,
    ns: Vec<usize>,
    set: &str,
    kind: &str,
    eta: f64,
    j_max: usize,
    grid_size: usize,
) -> PyResult<Vec<(usize, f64, f64)>> {
    let kind = match kind {
        "abs" => TraceKind::Abs,
        "residual" => TraceKind::Residual(ResidualSettings {
            eta,
            j_max,
            grid_size,
        }),
        other => return Err(PyValueError::new_err(format!("unknown trace kind {other:?}"))),
    };
    let trace = quadrature::norm_trace(&seq.inner, &ns, &parse_set(set)?, kind, &QuadSettings::default())
        .map_err(err)?;
    Ok(trace.entries().iter().map(|e| (e.n, e.value, e.error_estimate)).collect())
}

/// `(verdict, cauchy_gap, limit_estimate, uncertainty)` for `(N, value, error)` triples.
#[pyfunction]
#[pyo3(signature = (trace, window = 4))]
fn analyze(trace: Vec<(usize, f64, f64)>, window: usize) -> PyResult<(String, f64, f64, f64)> {
    let trace = NormTrace::from_triples(&trace).map_err(err)?;
    let v = analyze_trace(&trace, window).map_err(err)?;
    Ok((v.verdict.label().to_string(), v.cauchy_gap, v.limit_estimate, v.uncertainty))
}

/// Rows `(i, t, height, c)` of the Dirichlet extrema table.
#[pyfunction]
#[pyo3(signature = (n, tol = 1e-12))]
fn find_extrema(n: usize, tol: f64) -> PyResult<Vec<(usize, f64, f64, f64)>> {
    let table = extrema::find_extrema(n, tol).map_err(err)?;
    Ok(table.rows.iter().map(|r| (r.i, r.t, r.height, r.c)).collect())
}

/// `(measure, integral, cells)` of the witness set for `(N0, b, n)`.
#[pyfunction]
#[pyo3(signature = (seq, n0, b, n = None))]
fn build_witness(
    seq: &PySequence,
    n0: usize,
    b: usize,
    n: Option<usize>,
) -> PyResult<(f64, f64, Vec<(f64, f64)>)> {
    let n = n.unwrap_or_else(|| exceptional::default_order(n0, b));
    let w = exceptional::build_witness(&seq.inner, n0, b, n).map_err(err)?;
    Ok((w.measure, w.integral, w.cells.iter().map(|c| (c[0], c[1])).collect()))
}

#[pymodule]
fn pytrigseries(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySequence>()?;
    m.add_function(wrap_pyfunction!(dirichlet, m)?)?;
    m.add_function(wrap_pyfunction!(fejer, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_abs_partial_sum, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_signed, m)?)?;
    m.add_function(wrap_pyfunction!(norm_trace, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(find_extrema, m)?)?;
    m.add_function(wrap_pyfunction!(build_witness, m)?)?;
    Ok(())
}
