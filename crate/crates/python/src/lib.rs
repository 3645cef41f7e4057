use eqmf_core::{self as core, Rational};
use num_bigint::BigInt;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.numer().clone(), r.denom().clone()))
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let n: BigInt = obj.getattr("numerator")?.extract()?;
    let d: BigInt = obj.getattr("denominator")?.extract()?;
    if d == BigInt::from(0) {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

fn fractions<'py>(py: Python<'py>, rs: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    PyList::new(py, rs.iter().map(|r| fraction(py, r)).collect::<PyResult<Vec<_>>>()?)
}

/// Truncated q-series with exact rational coefficients.
#[pyclass(name = "QSeries", module = "eqmf", frozen, eq)]
#[derive(PartialEq)]
struct PyQSeries(core::QSeries);

#[pymethods]
impl PyQSeries {
    /// `QSeries(coeffs, prec=None)`; entries may be ints or Fractions.
    #[new]
    #[pyo3(signature = (coeffs, prec=None))]
    fn new(coeffs: Vec<Bound<'_, PyAny>>, prec: Option<usize>) -> PyResult<Self> {
        let cs = coeffs.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        let prec = prec.unwrap_or(cs.len());
        Ok(Self(core::QSeries::new(cs, prec).map_err(err)?))
    }

    #[getter]
    fn prec(&self) -> usize {
        self.0.prec()
    }

    fn coefficients<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, self.0.coeffs())
    }

    fn __len__(&self) -> usize {
        self.0.prec()
    }

    fn __getitem__<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        if n >= self.0.prec() {
            return Err(PyIndexError::new_err(format!("coefficient {n} is beyond precision {}", self.0.prec())));
        }
        fraction(py, self.0.coeff(n))
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn scale(&self, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self(self.0.scale(&rational(c)?)))
    }

    /// `q d/dq`.
    fn derive(&self) -> Self {
        Self(self.0.derive())
    }

    fn truncate(&self, prec: usize) -> Self {
        Self(self.0.truncate(prec))
    }

    fn order_of_vanishing(&self) -> Option<usize> {
        self.0.order_of_vanishing()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __repr__(&self) -> String {
        format!("QSeries({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Normalised `E_w` for even `w >= 2`.
#[pyfunction]
fn eisenstein(w: u32, prec: usize) -> PyResult<PyQSeries> {
    Ok(PyQSeries(core::eisenstein(w, prec).map_err(err)?.series))
}

#[pyfunction]
fn delta(prec: usize) -> PyQSeries {
    PyQSeries(core::delta(prec).series)
}

#[pyfunction]
#[pyo3(signature = (w, r=None))]
fn dim(w: i64, r: Option<u32>) -> PyResult<u64> {
    match r {
        None => Ok(core::dim_m(w)),
        Some(r) => core::dim_qm(w, r).map_err(err),
    }
}

#[pyfunction]
fn is_supported(w: u32, r: u32) -> bool {
    core::is_supported(w, r)
}

/// q-expansion of the normalised extremal form of weight `w`, depth `r`.
#[pyfunction]
fn extremal(w: u32, r: u32, prec: usize) -> PyResult<PyQSeries> {
    Ok(PyQSeries(core::extremal(w, r, prec).map_err(err)?.render()))
}

/// The extremal form as a polynomial in E2, E4, E6.
#[pyfunction]
fn extremal_polynomial(w: u32, r: u32) -> PyResult<String> {
    Ok(core::extremal_poly(w, r).map_err(err)?.to_string())
}

#[pyfunction]
fn eisenstein_vector<'py>(py: Python<'py>, w: u32, r: u32) -> PyResult<Bound<'py, PyList>> {
    fractions(py, &core::eisenstein_vector(w, r).map_err(err)?.coeffs)
}

/// `[(c_l, alpha_l)]` with `g = sum_l D^l (c_l E_(w-2l) + alpha_l)`.
#[pyfunction]
#[pyo3(signature = (w, r, prec=None))]
fn decompose<'py>(py: Python<'py>, w: u32, r: u32, prec: Option<usize>) -> PyResult<Vec<(Bound<'py, PyAny>, PyQSeries)>> {
    let prec = match prec {
        Some(p) => p,
        None => core::dim_qm(w as i64, r).map_err(err)? as usize + r as usize + 2,
    };
    let d = core::decompose_extremal(w, r, prec).map_err(err)?;
    d.entries.iter().map(|e| Ok((fraction(py, &e.eis_mult)?, PyQSeries(e.cusp.series.clone())))).collect()
}

/// Smallest n past which positivity of the coefficients is certified, if any.
#[pyfunction]
fn threshold(w: u32, r: u32) -> PyResult<Option<u64>> {
    core::threshold_n0(w, r).map_err(err)
}

#[pyfunction]
fn lower_bound<'py>(py: Python<'py>, w: u32, r: u32, n: u64) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &core::lower_bound_coefficient(w, r, n).map_err(err)?)
}

/// Positivity verification report.
#[pyclass(name = "PositivityReport", module = "eqmf", frozen, get_all)]
struct PyReport {
    weight: u32,
    depth: u32,
    n0: Option<u64>,
    scanned_up_to: u64,
    status: String,
    violations: Vec<(u64, String)>,
    wall_time_ms: u64,
    json: String,
}

#[pymethods]
impl PyReport {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "PositivityReport(weight={}, depth={}, status={:?}, n0={:?}, scanned_up_to={})",
            self.weight, self.depth, self.status, self.n0, self.scanned_up_to
        )
    }
}

#[pyfunction]
#[pyo3(signature = (w, r, prec_cap=None))]
fn verify(py: Python<'_>, w: u32, r: u32, prec_cap: Option<usize>) -> PyResult<PyReport> {
    let rep = py.detach(|| core::verify_positivity(w, r, prec_cap)).map_err(err)?;
    Ok(PyReport {
        weight: rep.weight,
        depth: rep.depth,
        n0: rep.n0,
        scanned_up_to: rep.scanned_up_to,
        status: rep.status.to_string(),
        violations: rep.violations.clone(),
        wall_time_ms: rep.wall_time_ms,
        json: rep.to_json(),
    })
}

#[pymodule]
fn eqmf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQSeries>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(eisenstein, m)?)?;
    m.add_function(wrap_pyfunction!(delta, m)?)?;
    m.add_function(wrap_pyfunction!(dim, m)?)?;
    m.add_function(wrap_pyfunction!(is_supported, m)?)?;
    m.add_function(wrap_pyfunction!(extremal, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(eisenstein_vector, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
