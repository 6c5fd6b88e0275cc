//! Python bindings. Reports come back as plain dicts (same shape as the CLI's
//! JSON); geometry types are small wrapper classes.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use sltwo::annulus::{self, AnnulusSpec, AreaOptions};
use sltwo::boundary::{self, IdealBoundaryCurve, IdealPolygon};
use sltwo::geometry::{self, Model, Point3};
use sltwo::plateau::{self, GridProblem, SolveOptions};
use sltwo::surfaces::{self, Family, FamilyGraph, InvariantSurface, Sheet};

create_exception!(pysltwo, SltwoError, PyException, "Raised for every library error; `.kind` names the variant.");

fn err(e: sltwo::Error) -> PyErr {
    Python::attach(|py| {
        let exc = SltwoError::new_err(e.to_string());
        // best effort: the message alone is still useful
        let _ = exc.value(py).setattr("kind", e.kind());
        exc
    })
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| SltwoError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn model(name: &str) -> PyResult<Model> {
    match name {
        "half" | "half-space" => Ok(Model::HalfSpace),
        "cyl" | "cylinder" => Ok(Model::Cylinder),
        other => Err(err(sltwo::Error::BadParameter(format!("unknown model '{other}' (expected half or cyl)")))),
    }
}

fn tau(value: f64) -> PyResult<geometry::Tau> {
    geometry::Tau::new(value).map_err(err)
}

#[pyclass(frozen, name = "Tau")]
struct PyTau(geometry::Tau);

#[pymethods]
impl PyTau {
    #[new]
    fn new(value: f64) -> PyResult<Self> {
        Ok(PyTau(tau(value)?))
    }

    #[getter]
    fn value(&self) -> f64 {
        self.0.value()
    }

    /// √(1+4τ²)·π, the tallness threshold
    fn threshold(&self) -> f64 {
        self.0.threshold()
    }

    fn sqrt_k(&self) -> f64 {
        self.0.sqrt_k()
    }

    fn __repr__(&self) -> String {
        format!("Tau({})", self.0.value())
    }
}

#[pyclass(frozen, name = "Point")]
struct PyPoint(Point3);

#[pymethods]
impl PyPoint {
    #[new]
    #[pyo3(signature = (x, y, t, model = "half"))]
    fn new(x: f64, y: f64, t: f64, model: &str) -> PyResult<Self> {
        Ok(PyPoint(Point3::new(x, y, t, self::model(model)?)))
    }

    #[getter]
    fn coords(&self) -> (f64, f64, f64) {
        (self.0.x, self.0.y, self.0.t)
    }

    #[getter]
    fn model(&self) -> &'static str {
        self.0.model.name()
    }

    fn to_cylinder(&self, tau: f64) -> PyResult<PyPoint> {
        geometry::to_cylinder(&self.0, self::tau(tau)?).map(PyPoint).map_err(err)
    }

    fn to_half_space(&self, tau: f64) -> PyResult<PyPoint> {
        geometry::to_half_space(&self.0, self::tau(tau)?).map(PyPoint).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Point({}, {}, {}, model='{}')", self.0.x, self.0.y, self.0.t, self.0.model.name())
    }
}

/// One sheet of an invariant family, e.g. `Surface("catenoid", c=10, tau=0.5)`.
#[pyclass(frozen, name = "Surface")]
struct PySurface {
    surface: InvariantSurface,
    graph: FamilyGraph,
}

#[pymethods]
impl PySurface {
    #[new]
    #[pyo3(signature = (family, *, d = None, l = 0.0, c = None, lam = 0.0, sheet = "plus", tau = 0.5))]
    fn new(family: &str, d: Option<f64>, l: f64, c: Option<f64>, lam: f64, sheet: &str, tau: f64) -> PyResult<Self> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| err(sltwo::Error::BadParameter(format!("family '{family}' needs {name}"))))
        };
        let family = match family {
            "slab-bigraph" | "slab" => Family::SlabBigraph { d: need(d, "d")? },
            "tilted" => Family::Tilted { d: need(d, "d")?, l },
            "fan" => Family::Fan { c: need(c, "c")? },
            "catenoid" => Family::Catenoid { c: need(c, "c")? },
            "umbrella-limit" | "umbrella" => Family::UmbrellaLimit { lambda: lam },
            other => return Err(err(sltwo::Error::BadParameter(format!("unknown family '{other}'")))),
        };
        let sheet = match sheet {
            "plus" => Sheet::Plus,
            "minus" => Sheet::Minus,
            other => return Err(err(sltwo::Error::BadParameter(format!("unknown sheet '{other}'")))),
        };
        let surface = InvariantSurface::new(family, sheet, self::tau(tau)?).map_err(err)?;
        let graph = surfaces::as_graph(&surface).map_err(err)?;
        Ok(PySurface { surface, graph })
    }

    #[getter]
    fn label(&self) -> String {
        self.surface.label()
    }

    /// Height over a half-space point (fold included).
    fn value(&self, x: f64, y: f64) -> PyResult<f64> {
        self.graph.value(x, y).map_err(err)
    }

    #[pyo3(signature = (samples = 200, tol = 1e-6))]
    fn verify<'py>(&self, py: Python<'py>, samples: usize, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let r = py.detach(|| sltwo::minimality::verify_surface(&self.surface, samples, tol)).map_err(err)?;
        to_dict(py, &r)
    }

    /// `(vertices, faces)` with zero-based faces.
    #[pyo3(signature = (model = "half", resolution = 64, glue = true))]
    fn mesh(&self, model: &str, resolution: usize, glue: bool) -> PyResult<(Vec<[f64; 3]>, Vec<[usize; 3]>)> {
        let m = surfaces::surface_mesh(&self.surface, self::model(model)?, resolution, glue).map_err(err)?;
        Ok((m.vertices, m.faces))
    }

    #[pyo3(signature = (resolution = 64))]
    fn asymptotic_boundary(&self, resolution: usize) -> PyResult<PyCurve> {
        surfaces::asymptotic_boundary(&self.surface, resolution).map(PyCurve).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Surface({})", self.surface.label())
    }
}

/// Ideal boundary curve; built from the text format or as horizontal circles.
#[pyclass(frozen, name = "Curve")]
struct PyCurve(IdealBoundaryCurve);

#[pymethods]
impl PyCurve {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyCurve> {
        boundary::parse_curve(text).map(PyCurve).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (heights, samples = 64))]
    fn circles(heights: Vec<f64>, samples: usize) -> PyResult<PyCurve> {
        IdealBoundaryCurve::horizontal_circles(&heights, samples).map(PyCurve).map_err(err)
    }

    fn to_text(&self) -> String {
        boundary::write_curve(&self.0)
    }

    #[getter]
    fn model(&self) -> &'static str {
        self.0.model.name()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    fn tallness<'py>(&self, py: Python<'py>, tau: f64) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &boundary::tallness(&self.0, self::tau(tau)?))
    }

    fn folds<'py>(&self, py: Python<'py>, tau: f64) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &boundary::check_fold_hypotheses(&self.0, self::tau(tau)?).map_err(err)?)
    }

    fn short_arc<'py>(&self, py: Python<'py>, tau: f64) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &boundary::check_short_arc_hypothesis(&self.0, self::tau(tau)?))
    }

    /// `direction` is "half2cyl" or "cyl2half".
    #[pyo3(signature = (direction, tau, resolution = 8))]
    fn transport(&self, direction: &str, tau: f64, resolution: usize) -> PyResult<PyCurve> {
        let dir = direction.parse().map_err(err)?;
        boundary::transport_boundary(&self.0, dir, self::tau(tau)?, resolution).map(PyCurve).map_err(err)
    }
}

#[pyfunction]
fn tilted_height(d: f64, l: f64, tau: f64) -> PyResult<f64> {
    surfaces::tilted_height(d, l, self::tau(tau)?).map_err(err)
}

#[pyfunction]
fn fan_total_height(c: f64, tau: f64) -> PyResult<f64> {
    surfaces::fan_total_height(c, self::tau(tau)?).map_err(err)
}

#[pyfunction]
fn catenoid_root(c: f64) -> PyResult<f64> {
    surfaces::catenoid_root(c).map_err(err)
}

#[pyfunction]
fn catenoid_neck_height(c: f64, tau: f64) -> PyResult<f64> {
    surfaces::catenoid_neck_height(c, self::tau(tau)?).map_err(err)
}

#[pyfunction]
fn disk_area(rho: f64, tau: f64) -> PyResult<f64> {
    annulus::disk_area(rho, self::tau(tau)?).map_err(err)
}

fn spec(rho_bar: f64, rho: f64, tau: f64) -> PyResult<AnnulusSpec> {
    AnnulusSpec::new(rho_bar, rho, self::tau(tau)?).map_err(err)
}

#[pyfunction]
fn douglas_check<'py>(py: Python<'py>, rho_bar: f64, rho: f64, tau: f64) -> PyResult<Bound<'py, PyAny>> {
    let s = spec(rho_bar, rho, tau)?;
    to_dict(py, &py.detach(|| annulus::douglas_check(&s)).map_err(err)?)
}

#[pyfunction]
fn boundary_gap(rho_bar: f64, rho: f64, tau: f64) -> PyResult<f64> {
    annulus::boundary_gap(&spec(rho_bar, rho, tau)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (rho_bars, ratio = 1.25, tau = 0.5))]
fn douglas_sweep<'py>(py: Python<'py>, rho_bars: Vec<f64>, ratio: f64, tau: f64) -> PyResult<Bound<'py, PyAny>> {
    let t = self::tau(tau)?;
    let rows = py.detach(|| annulus::douglas_sweep(&rho_bars, ratio, t, &AreaOptions::default())).map_err(err)?;
    to_dict(py, &rows)
}

/// Horocycles are Euclidean diameters in the disk, one per ideal vertex.
/// `origin` defaults to true, as in polygon files.
#[pyfunction]
#[pyo3(signature = (thetas, horocycles, origin = true))]
fn jenkins_serrin_check<'py>(
    py: Python<'py>,
    thetas: Vec<f64>,
    horocycles: Vec<f64>,
    origin: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let p = IdealPolygon::new(thetas, horocycles, origin).map_err(err)?;
    to_dict(py, &py.detach(|| boundary::jenkins_serrin_check(&p)).map_err(err)?)
}

/// Solve a Dirichlet problem given as TOML (the CLI's `--problem` format).
/// Returns the solution dict, with `values[j * nx + i]` at (x_i, y_j).
#[pyfunction]
#[pyo3(signature = (problem, tol = 1e-10, max_iter = 50))]
fn solve<'py>(py: Python<'py>, problem: &str, tol: f64, max_iter: usize) -> PyResult<Bound<'py, PyAny>> {
    let p = GridProblem::from_toml_str(problem).map_err(err)?;
    let opts = SolveOptions { tol, max_iter, parallel: false };
    let sol = py.detach(|| plateau::solve(&p, &opts)).map_err(err)?;
    let d = to_dict(py, &sol)?;
    let exact = match p.exact().map_err(err)? {
        Some(_) => Some(plateau::max_node_error(&p, &sol).map_err(err)?),
        None => None,
    };
    d.cast::<PyDict>()?.set_item("max_node_error", exact)?;
    Ok(d)
}

#[pymodule]
fn pysltwo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SltwoError", m.py().get_type::<SltwoError>())?;
    m.add_class::<PyTau>()?;
    m.add_class::<PyPoint>()?;
    m.add_class::<PySurface>()?;
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(tilted_height, m)?)?;
    m.add_function(wrap_pyfunction!(fan_total_height, m)?)?;
    m.add_function(wrap_pyfunction!(catenoid_root, m)?)?;
    m.add_function(wrap_pyfunction!(catenoid_neck_height, m)?)?;
    m.add_function(wrap_pyfunction!(disk_area, m)?)?;
    m.add_function(wrap_pyfunction!(douglas_check, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_gap, m)?)?;
    m.add_function(wrap_pyfunction!(douglas_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(jenkins_serrin_check, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    Ok(())
}
