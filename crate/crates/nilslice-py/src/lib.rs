//! Python bindings. Exact scalars cross the boundary as strings such as
//! "3/4" or "1-2*i"; Python ints are accepted wherever a scalar is expected.

use ::nilslice::hilbert::{b_fiber_partner, ideal_point_from_coords, support_points, IdealPoint};
use ::nilslice::kernel::{CPoly, ComplexF, GaussianRational};
use ::nilslice::liealg::{AlgebraKind, Family};
use ::nilslice::sampling::{cell_id, random_coords, sample_rng};
use ::nilslice::slices::{self, QCoords, SliceCoords};
use ::nilslice::spectra::{self, charpoly_identity_check};
use ::nilslice::transversality::transversality_certificate;
use nilslice_cli::{run, CampaignConfig, Command, NPolicy};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn family(s: &str) -> PyResult<Family> {
    s.parse().map_err(value_err)
}

fn scalar(x: &Bound<'_, PyAny>) -> PyResult<GaussianRational> {
    x.str()?.to_str()?.parse().map_err(value_err)
}

fn strings(v: &[GaussianRational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn coeffs(p: &CPoly) -> Vec<ComplexF> {
    p.coeffs().to_vec()
}

/// A valid (kind, m, n) slice index.
#[pyclass(name = "OrbitIndex", frozen, skip_from_py_object)]
struct PyOrbitIndex(slices::OrbitIndex);

#[pymethods]
impl PyOrbitIndex {
    #[new]
    fn new(kind: &str, m: usize, n: usize) -> PyResult<Self> {
        slices::OrbitIndex::new(family(kind)?, m, n).map(PyOrbitIndex).map_err(value_err)
    }

    #[staticmethod]
    fn all(kind: &str, m: usize) -> PyResult<Vec<PyOrbitIndex>> {
        Ok(slices::OrbitIndex::all(family(kind)?, m).into_iter().map(PyOrbitIndex).collect())
    }

    #[getter]
    fn kind(&self) -> String {
        self.0.family().to_string()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn codim(&self) -> usize {
        self.0.codim()
    }

    fn coord_names(&self) -> Vec<String> {
        self.0.coord_names()
    }

    fn __repr__(&self) -> String {
        format!("OrbitIndex('{}', {}, {})", self.0.family(), self.0.m(), self.0.n)
    }
}

impl PyOrbitIndex {
    fn coords(&self, values: &Bound<'_, PyList>) -> PyResult<QCoords> {
        let v = values.iter().map(|x| scalar(&x)).collect::<PyResult<Vec<_>>>()?;
        SliceCoords::from_flat(self.0, v).map_err(value_err)
    }
}

/// Seeded coordinates, identical to the ones the campaigns draw.
#[pyfunction]
#[pyo3(signature = (idx, seed, sample=0, campaign=0))]
fn sample_coords(idx: &PyOrbitIndex, seed: u64, sample: u64, campaign: u8) -> Vec<String> {
    let c = random_coords(idx.0, &mut sample_rng(seed, cell_id(campaign, idx.0), sample));
    strings(&c.to_flat())
}

/// The slice matrix at the given coordinates, entries as strings.
#[pyfunction]
fn slice_point(idx: &PyOrbitIndex, coords: &Bound<'_, PyList>) -> PyResult<Vec<Vec<String>>> {
    let x = slices::slice_point(idx.0, &idx.coords(coords)?).map_err(value_err)?;
    let e = &x.entries;
    Ok((0..e.rows()).map(|i| strings(e.row(i))).collect())
}

/// Exact characteristic polynomial minus the closed form, coefficients
/// from t⁰ up; empty when the identity holds.
#[pyfunction]
fn charpoly_residual(idx: &PyOrbitIndex, coords: &Bound<'_, PyList>) -> PyResult<Vec<String>> {
    let r = charpoly_identity_check(idx.0, &idx.coords(coords)?).map_err(value_err)?;
    Ok(strings(r.coeffs()))
}

/// Squared eigenvalues μ and, for type D, the sign invariant p.
#[pyfunction]
fn spectral_class<'py>(py: Python<'py>, idx: &PyOrbitIndex, coords: &Bound<'py, PyList>) -> PyResult<Bound<'py, PyDict>> {
    let x = slices::slice_point(idx.0, &idx.coords(coords)?).map_err(value_err)?;
    let tau = spectra::spectral_class_of(&x).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("kind", idx.0.family().to_string())?;
    d.set_item("mu", tau.mu.clone())?;
    d.set_item("p", tau.p_sign)?;
    d.set_item("reduced", coeffs(&tau.reduced))?;
    d.set_item("regular", spectra::is_regular(&tau, 1e-9))?;
    Ok(d)
}

#[pyfunction]
fn transversality<'py>(py: Python<'py>, idx: &PyOrbitIndex) -> PyResult<Bound<'py, PyDict>> {
    let c = transversality_certificate(idx.0).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("rank_ad", c.rank_ad)?;
    d.set_item("dim_v", c.dim_v)?;
    d.set_item("rank_joint", c.rank_joint)?;
    d.set_item("verdict", c.verdict)?;
    Ok(d)
}

/// Reduces the n = 1 fiber over τ = 0 to a Kleinian normal form.
#[pyfunction]
fn kleinian<'py>(py: Python<'py>, kind: &str, m: usize) -> PyResult<Bound<'py, PyDict>> {
    let k = AlgebraKind::new(family(kind)?, m).map_err(value_err)?;
    let r = spectra::kleinian_check(k).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("expected", r.expected.to_string())?;
    d.set_item("found", r.found.to_string())?;
    d.set_item("normal_form", r.normal_form)?;
    d.set_item("matches", r.matches)?;
    Ok(d)
}

fn ideal_dict<'py>(py: Python<'py>, ip: &IdealPoint) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("A", coeffs(&ip.a_hat))?;
    d.set_item("D", coeffs(&ip.d_hat))?;
    d.set_item("U", coeffs(&ip.u_hat))?;
    d.set_item("V", coeffs(&ip.v_hat))?;
    d.set_item("W", ip.w_hat.as_ref().map(coeffs))?;
    d.set_item("remainder", ip.remainder)?;
    Ok(d)
}

/// The point of the Hilbert scheme for these coordinates, with its support
/// as (x, y, z) triples.
#[pyfunction]
fn ideal_point<'py>(py: Python<'py>, idx: &PyOrbitIndex, coords: &Bound<'py, PyList>) -> PyResult<Bound<'py, PyDict>> {
    let ip = ideal_point_from_coords(idx.0, &idx.coords(coords)?).map_err(value_err)?;
    let d = ideal_dict(py, &ip)?;
    let sp = support_points(&ip, 1e-12).map_err(value_err)?;
    let pts: Vec<(ComplexF, ComplexF, ComplexF)> = sp.points.iter().map(|p| (p[0], p[1], p[2])).collect();
    d.set_item("support", pts)?;
    Ok(d)
}

/// (a₀, d₀) ↦ (−a₀, −d₀) for type B.
#[pyfunction]
fn partner(idx: &PyOrbitIndex, coords: &Bound<'_, PyList>) -> PyResult<Vec<String>> {
    let p = b_fiber_partner(&idx.coords(coords)?).map_err(value_err)?;
    Ok(strings(&p.to_flat()))
}

/// Runs a CLI campaign and returns the report as JSON text.
#[pyfunction]
#[pyo3(signature = (command, kind=None, m_max=6, n=None, samples=None, seed=1))]
fn run_campaign(
    py: Python<'_>,
    command: &str,
    kind: Option<&str>,
    m_max: usize,
    n: Option<usize>,
    samples: Option<usize>,
    seed: u64,
) -> PyResult<String> {
    let command: Command = command.parse().map_err(value_err)?;
    let mut config = CampaignConfig { m_max, samples, seed, ..CampaignConfig::default() };
    if let Some(k) = kind {
        config.kinds = vec![family(k)?];
    }
    if let Some(n) = n {
        config.n = NPolicy::Explicit(n);
    }
    let report = py.detach(|| run(command, &config)).map_err(value_err)?;
    Ok(report.to_json())
}

#[pymodule]
#[pyo3(name = "nilslice")]
fn nilslice_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOrbitIndex>()?;
    m.add_function(wrap_pyfunction!(sample_coords, m)?)?;
    m.add_function(wrap_pyfunction!(slice_point, m)?)?;
    m.add_function(wrap_pyfunction!(charpoly_residual, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_class, m)?)?;
    m.add_function(wrap_pyfunction!(transversality, m)?)?;
    m.add_function(wrap_pyfunction!(kleinian, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_point, m)?)?;
    m.add_function(wrap_pyfunction!(partner, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    Ok(())
}
