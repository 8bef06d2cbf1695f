//! Python bindings for the `hyperzeta` crate. The extension module is
//! named `hyperzeta`; exact values come back as `fractions.Fraction`.

use std::path::PathBuf;

use num_bigint::BigInt;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hyperzeta::anomaly::{self, AlphaPolicy, AnomalySpec, CellEntry, TableKind};
use hyperzeta::exact_arith::{self, Rational};
use hyperzeta::heat_zeta;
use hyperzeta::manifold::{self, ManifoldData};
use hyperzeta::report::{OutputTable, TableFormat, DEFAULT_DIGITS};
use hyperzeta::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((q.numer().clone(), q.denom().clone()))
}

/// Accepts int, Fraction, float (exactly), or a string "a/b" / "0.25".
pub fn extract_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(text) = obj.extract::<String>() {
        return exact_arith::parse_rational(&text).map_err(py_err);
    }
    let (num, den): (BigInt, BigInt) = obj.call_method0("as_integer_ratio")?.extract()?;
    Ok(Rational::new(num, den))
}

/// q * pi^-m with q rational.
#[pyclass(name = "PiValue", module = "hyperzeta", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyPiValue {
    inner: exact_arith::PiValue,
}

#[pymethods]
impl PyPiValue {
    #[new]
    #[pyo3(signature = (coefficient, pi_exponent=0))]
    fn new(coefficient: &Bound<'_, PyAny>, pi_exponent: u32) -> PyResult<Self> {
        Ok(Self { inner: exact_arith::PiValue::new(extract_rational(coefficient)?, pi_exponent) })
    }

    /// Parse the `"-67/160 * pi^-2"` rendering.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: text.parse().map_err(py_err)? })
    }

    #[getter]
    fn coefficient<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.coefficient())
    }

    #[getter]
    fn pi_exponent(&self) -> u32 {
        self.inner.pi_exponent()
    }

    #[pyo3(signature = (digits=DEFAULT_DIGITS))]
    fn to_decimal(&self, digits: usize) -> String {
        self.inner.to_decimal(digits)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.checked_add(&other.inner).map_err(py_err)? })
    }

    fn __neg__(&self) -> Self {
        Self { inner: -self.inner.clone() }
    }

    fn __float__(&self) -> f64 {
        self.inner.to_f64()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PiValue('{}')", self.inner)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.to_string().hash(&mut h);
        h.finish()
    }
}

impl From<exact_arith::PiValue> for PyPiValue {
    fn from(inner: exact_arith::PiValue) -> Self {
        Self { inner }
    }
}

#[pyclass(name = "AnomalyResult", module = "hyperzeta", frozen)]
pub struct PyAnomalyResult {
    inner: anomaly::AnomalyResult,
}

#[pymethods]
impl PyAnomalyResult {
    #[getter]
    fn value(&self) -> PyPiValue {
        self.inner.value.clone().into()
    }

    /// chi(1) Vol R^n times the anomaly, when a volume was supplied.
    #[getter]
    fn zeta_zero(&self) -> Option<PyPiValue> {
        self.inner.zeta_zero.clone().map(Into::into)
    }

    #[getter]
    fn prefactor<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.prefactor)
    }

    /// List of (j, l, Fraction) summands before the prefactor.
    #[getter]
    fn breakdown<'py>(&self, py: Python<'py>) -> PyResult<Vec<(u32, u32, Bound<'py, PyAny>)>> {
        self.inner
            .breakdown
            .iter()
            .map(|t| Ok((t.j, t.l, fraction(py, &t.value)?)))
            .collect()
    }

    fn __float__(&self) -> f64 {
        self.inner.value.to_f64()
    }

    fn __str__(&self) -> String {
        self.inner.value.to_string()
    }

    fn __repr__(&self) -> String {
        format!("AnomalyResult('{}')", self.inner.value)
    }
}

#[pyfunction]
#[pyo3(signature = (n, p=0, alpha_mode="default", mass_sq=None, alpha=None, radius=None, volume=None))]
fn conformal_anomaly(
    n: u32,
    p: u32,
    alpha_mode: &str,
    mass_sq: Option<&Bound<'_, PyAny>>,
    alpha: Option<&Bound<'_, PyAny>>,
    radius: Option<&Bound<'_, PyAny>>,
    volume: Option<&Bound<'_, PyAny>>,
) -> PyResult<PyAnomalyResult> {
    let required = |v: Option<&Bound<'_, PyAny>>, name: &str| -> PyResult<Rational> {
        match v {
            Some(obj) => extract_rational(obj),
            None => Err(PyValueError::new_err(format!("alpha_mode={alpha_mode:?} needs {name}"))),
        }
    };
    let policy = match alpha_mode {
        "default" => AlphaPolicy::Default,
        "conformal-scalar" => AlphaPolicy::ConformalScalar,
        "massive" => AlphaPolicy::MassiveScalar(required(mass_sq, "mass_sq")?),
        "custom" => AlphaPolicy::Custom(required(alpha, "alpha")?),
        other => return Err(PyValueError::new_err(format!("unknown alpha_mode {other:?}"))),
    };
    let mut spec = AnomalySpec::new(n, p, policy).map_err(py_err)?;
    if let Some(r) = radius {
        spec = spec.with_radius(extract_rational(r)?).map_err(py_err)?;
    }
    if let Some(v) = volume {
        spec = spec.with_volume(extract_rational(v)?).map_err(py_err)?;
    }
    let inner = anomaly::conformal_anomaly(&spec).map_err(py_err)?;
    Ok(PyAnomalyResult { inner })
}

#[pyfunction]
fn conformal_scalar_anomaly(n: u32) -> PyResult<PyAnomalyResult> {
    let inner = anomaly::conformal_scalar_anomaly(n).map_err(py_err)?;
    Ok(PyAnomalyResult { inner })
}

#[pyfunction]
fn bernoulli(py: Python<'_>, m: usize) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &exact_arith::bernoulli(m))
}

/// a_{2l} for l = 0..k-1, constant term first.
#[pyfunction]
fn miatello_coefficients(py: Python<'_>, k: u32, p: i64) -> PyResult<Vec<Bound<'_, PyAny>>> {
    hyperzeta::plancherel::miatello_coefficients(k, p)
        .map_err(py_err)?
        .iter()
        .map(|q| fraction(py, q))
        .collect()
}

#[pyfunction]
fn plancherel_density(k: u32, p: u32, r: f64) -> PyResult<f64> {
    hyperzeta::plancherel::plancherel_density(k, p, r).map_err(py_err)
}

#[pyfunction]
fn bessel_k(order: f64, z: f64) -> PyResult<f64> {
    hyperzeta::bessel::bessel_k(order, z).map_err(py_err)
}

/// Truncated asymptotic series of int r^{2l+1} e^{-t r^2} tanh(pi r) dr.
/// `order=None` truncates at the smallest term.
#[pyfunction]
#[pyo3(signature = (l, t, order=None))]
fn tanh_moment_series(py: Python<'_>, l: u32, t: f64, order: Option<usize>) -> PyResult<Bound<'_, PyDict>> {
    let s = heat_zeta::tanh_moment_series(l, t, order.unwrap_or(usize::MAX)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("value", s.value)?;
    d.set_item("first_omitted", s.first_omitted)?;
    d.set_item("order_used", s.order_used)?;
    d.set_item("optimal_index", s.optimal_index)?;
    d.set_item("truncated_at_optimal", s.truncated_at_optimal)?;
    Ok(d)
}

#[pyfunction]
fn tanh_moment_quadrature(l: u32, t: f64) -> PyResult<(f64, f64)> {
    let q = heat_zeta::tanh_moment_quadrature(l, t).map_err(py_err)?;
    Ok((q.value, q.error))
}

fn table_kind(which: &str) -> PyResult<TableKind> {
    match which {
        "table1" => Ok(TableKind::Scalar),
        "table2" => Ok(TableKind::PForm),
        "custom" => Ok(TableKind::Custom),
        other => Err(PyValueError::new_err(format!("unknown table {other:?}"))),
    }
}

/// List of (n, p, PiValue or None); None marks cells outside p < n/2.
#[pyfunction]
#[pyo3(signature = (which="table2", dims=None, forms=None))]
fn generate_table(
    which: &str,
    dims: Option<Vec<u32>>,
    forms: Option<Vec<u32>>,
) -> PyResult<Vec<(u32, u32, Option<PyPiValue>)>> {
    let table = anomaly::generate_table(table_kind(which)?, dims.as_deref(), forms.as_deref())
        .map_err(py_err)?;
    Ok(table
        .cells
        .iter()
        .map(|c| {
            let v = match &c.entry {
                CellEntry::Value(r) => Some(r.value.clone().into()),
                CellEntry::Excluded(_) => None,
            };
            (c.dimension, c.form_order, v)
        })
        .collect())
}

#[pyfunction]
#[pyo3(signature = (which="table2", dims=None, forms=None, format="markdown", digits=DEFAULT_DIGITS))]
fn render_table(
    which: &str,
    dims: Option<Vec<u32>>,
    forms: Option<Vec<u32>>,
    format: &str,
    digits: usize,
) -> PyResult<String> {
    let fmt = match format {
        "markdown" => TableFormat::Markdown,
        "csv" => TableFormat::Csv,
        "plain" => TableFormat::Plain,
        other => return Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    };
    let table = anomaly::generate_table(table_kind(which)?, dims.as_deref(), forms.as_deref())
        .map_err(py_err)?;
    Ok(OutputTable::from_anomaly_table(&table, digits).render(fmt))
}

/// (length, power, c_gamma) for each class, sorted by length.
#[pyfunction]
fn synth_spectrum(seed: u64, count: usize, min_length: f64, max_power: u32, n: u32) -> PyResult<Vec<(f64, u32, f64)>> {
    Ok(manifold::synth_spectrum(seed, count, min_length, max_power, n)
        .map_err(py_err)?
        .into_iter()
        .map(|g| (g.length, g.power, g.c_gamma))
        .collect())
}

#[pyclass(name = "Manifold", module = "hyperzeta", frozen)]
pub struct PyManifold {
    inner: ManifoldData,
}

#[pymethods]
impl PyManifold {
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self { inner: ManifoldData::load(path).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        let inner = ManifoldData::from_toml_str(text, std::path::Path::new("<string>")).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Seeded synthetic spectrum with trivial holonomy.
    #[staticmethod]
    #[pyo3(signature = (n, volume, seed=7, count=5, min_length=1.0, max_power=3, betti=None))]
    fn synthetic(
        n: u32,
        volume: f64,
        seed: u64,
        count: usize,
        min_length: f64,
        max_power: u32,
        betti: Option<Vec<u64>>,
    ) -> PyResult<Self> {
        let spectrum = manifold::synth_spectrum(seed, count, min_length, max_power, n).map_err(py_err)?;
        let mut inner = ManifoldData::new(n, volume, spectrum).map_err(py_err)?;
        if let Some(b) = betti {
            inner = inner.with_betti(b).map_err(py_err)?;
        }
        Ok(Self { inner })
    }

    #[getter]
    fn dimension(&self) -> u32 {
        self.inner.dimension()
    }

    #[getter]
    fn volume(&self) -> f64 {
        self.inner.volume()
    }

    #[getter]
    fn betti(&self) -> Option<Vec<u64>> {
        self.inner.betti().map(|b| b.to_vec())
    }

    #[getter]
    fn geodesic_count(&self) -> usize {
        self.inner.geodesics().len()
    }

    fn to_toml(&self) -> String {
        self.inner.to_toml_string()
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        self.inner.save(path).map_err(py_err)
    }

    /// Plain (or co-exact) heat trace at time t, as a dict of its parts.
    #[pyo3(signature = (p, t, coexact=false))]
    fn heat_trace<'py>(&self, py: Python<'py>, p: i64, t: f64, coexact: bool) -> PyResult<Bound<'py, PyDict>> {
        let r = if coexact {
            heat_zeta::coexact_trace(&self.inner, p, t)
        } else {
            heat_zeta::heat_trace(&self.inner, p, t)
        }
        .map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("t", r.t)?;
        d.set_item("identity", r.identity_part)?;
        d.set_item("hyperbolic", r.hyperbolic_part)?;
        d.set_item("betti", r.betti_part)?;
        d.set_item("total", r.total)?;
        d.set_item("remainder_bound", r.hyperbolic_remainder_bound)?;
        d.set_item("empty_spectrum", r.empty_spectrum)?;
        Ok(d)
    }

    /// Mellin transform of the hyperbolic term in closed (Bessel) form.
    fn mellin(&self, p: i64, s: f64) -> PyResult<f64> {
        heat_zeta::mellin_hyperbolic(&self.inner, p, s).map_err(py_err)
    }

    /// The same transform by direct t-quadrature: (value, error estimate).
    fn mellin_quadrature(&self, p: i64, s: f64) -> PyResult<(f64, f64)> {
        let q = heat_zeta::mellin_hyperbolic_quadrature(&self.inner, p, s).map_err(py_err)?;
        Ok((q.value, q.error))
    }

    fn zeta_hyperbolic(&self, p: i64, s: f64) -> PyResult<f64> {
        heat_zeta::zeta_hyperbolic(&self.inner, p, s).map_err(py_err)
    }

    /// Identity-sector zeta(0) for the q-th term: exact per unit chi(1) Vol
    /// times this manifold's chi(1) Vol.
    fn identity_zeta_zero(&self, q: i64) -> PyResult<f64> {
        let per_unit = heat_zeta::identity_sector_zeta_zero(self.inner.dimension(), q).map_err(py_err)?;
        Ok(self.inner.chi_one() * self.inner.volume() * exact_arith::to_f64(&per_unit))
    }

    fn __repr__(&self) -> String {
        format!(
            "Manifold(n={}, volume={}, geodesics={})",
            self.inner.dimension(),
            self.inner.volume(),
            self.inner.geodesics().len()
        )
    }
}

#[pymodule]
#[pyo3(name = "hyperzeta")]
fn hyperzeta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPiValue>()?;
    m.add_class::<PyAnomalyResult>()?;
    m.add_class::<PyManifold>()?;
    m.add_function(wrap_pyfunction!(conformal_anomaly, m)?)?;
    m.add_function(wrap_pyfunction!(conformal_scalar_anomaly, m)?)?;
    m.add_function(wrap_pyfunction!(bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(miatello_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(plancherel_density, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_k, m)?)?;
    m.add_function(wrap_pyfunction!(tanh_moment_series, m)?)?;
    m.add_function(wrap_pyfunction!(tanh_moment_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(generate_table, m)?)?;
    m.add_function(wrap_pyfunction!(render_table, m)?)?;
    m.add_function(wrap_pyfunction!(synth_spectrum, m)?)?;
    m.add("FORMAT_VERSION", manifold::FORMAT_VERSION)?;
    Ok(())
}
