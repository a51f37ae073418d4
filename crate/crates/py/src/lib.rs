//! Python bindings: bodies, criticality checks, hollow certification and
//! the Sperner/KKM solvers, with points passed as lists of floats.

use hollowkit::bodies::{Ball, Body, ConvexBody, HPolytope, IntersectionBody, VPolytope};
use hollowkit::critical::{self, CriticalFamily, Criticality};
use hollowkit::families;
use hollowkit::geom::{self, AffineSubspace, Point};
use hollowkit::hollow::{self, StabbingPair};
use hollowkit::opt::{self, FeasibilityReport, DEFAULT_TOL};
use hollowkit::sperner::{self, KkmInstance, KleeMethod, KleeOptions};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

create_exception!(pyhollowkit, HollowkitError, PyValueError);

fn err(e: impl std::fmt::Display) -> PyErr {
    HollowkitError::new_err(e.to_string())
}

fn pt(c: Vec<f64>) -> Point {
    Point::from_vec(c)
}

fn pts(c: Vec<Vec<f64>>) -> Vec<Point> {
    c.into_iter().map(pt).collect()
}

fn list(p: &Point) -> Vec<f64> {
    p.iter().copied().collect()
}

fn lists(ps: &[Point]) -> Vec<Vec<f64>> {
    ps.iter().map(list).collect()
}

fn unwrap_bodies(bodies: &[PyRef<'_, PyBody>]) -> Vec<Body> {
    bodies.iter().map(|b| b.inner.clone()).collect()
}

/// A compact convex body in R^d.
#[pyclass(name = "Body", module = "pyhollowkit", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyBody {
    inner: Body,
}

#[pymethods]
impl PyBody {
    /// `{x : normals[i] . x <= offsets[i]}`; must be bounded and nonempty.
    #[staticmethod]
    fn hpoly(normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> PyResult<Self> {
        let inner = HPolytope::new(pts(normals), offsets).map_err(err)?.into();
        Ok(PyBody { inner })
    }

    /// Axis-aligned box `[lo, hi]` as an H-polytope.
    #[staticmethod]
    #[pyo3(name = "box")]
    fn box_(lo: Vec<f64>, hi: Vec<f64>) -> PyResult<Self> {
        let inner = HPolytope::from_box(&pt(lo), &pt(hi)).map_err(err)?.into();
        Ok(PyBody { inner })
    }

    /// Convex hull of the given points.
    #[staticmethod]
    fn vpoly(points: Vec<Vec<f64>>) -> PyResult<Self> {
        let inner = VPolytope::new(pts(points)).map_err(err)?.into();
        Ok(PyBody { inner })
    }

    #[staticmethod]
    fn ball(center: Vec<f64>, radius: f64) -> PyResult<Self> {
        let inner = Ball::new(pt(center), radius).map_err(err)?.into();
        Ok(PyBody { inner })
    }

    /// Intersection of bodies; fails when they share no point.
    #[staticmethod]
    fn intersection(bodies: Vec<PyRef<'_, PyBody>>) -> PyResult<Self> {
        let inner = IntersectionBody::new(unwrap_bodies(&bodies)).map_err(err)?.into();
        Ok(PyBody { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind()
    }

    #[pyo3(signature = (p, tol = DEFAULT_TOL))]
    fn contains(&self, p: Vec<f64>, tol: f64) -> bool {
        self.inner.contains(&pt(p), tol)
    }

    fn project(&self, p: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(list(&self.inner.project(&pt(p)).map_err(err)?))
    }

    fn distance(&self, p: Vec<f64>) -> PyResult<f64> {
        self.inner.distance(&pt(p)).map_err(err)
    }

    /// A point maximizing `direction . x` over the body.
    fn support(&self, direction: Vec<f64>) -> Vec<f64> {
        list(&self.inner.support(&pt(direction)))
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let (lo, hi) = self.inner.bounding_box();
        (list(&lo), list(&hi))
    }

    fn __repr__(&self) -> String {
        format!("Body(kind={:?}, dim={})", self.inner.kind(), self.inner.dim())
    }
}

/// A certified n-critical family, as returned inside `check_critical`.
#[pyclass(name = "CriticalFamily", module = "pyhollowkit", frozen)]
pub struct PyCriticalFamily {
    inner: CriticalFamily,
}

#[pymethods]
impl PyCriticalFamily {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn witnesses(&self) -> Vec<Vec<f64>> {
        lists(self.inner.witnesses())
    }

    #[getter]
    fn gaps(&self) -> Vec<f64> {
        self.inner.gaps()
    }

    #[getter]
    fn bodies(&self) -> Vec<PyBody> {
        self.inner.bodies().iter().map(|b| PyBody { inner: b.clone() }).collect()
    }

    /// `{"vertices", "partners", "gaps"}` of the hollow simplex (n = d).
    fn hollow_simplex<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let hs = critical::hollow_simplex(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("vertices", lists(hs.vertices()))?;
        d.set_item("partners", lists(hs.partners()))?;
        d.set_item("gaps", hs.gaps().to_vec())?;
        Ok(d)
    }

    /// Grid reconstruction of the hollow compared with the hollow simplex.
    fn certify_hollow<'py>(&self, py: Python<'py>, resolution: f64) -> PyResult<Bound<'py, PyDict>> {
        let hs = critical::hollow_simplex(&self.inner).map_err(err)?;
        let cert = hollow::certify_hollow(&self.inner, resolution).map_err(err)?;
        let distance = hollow::hull_vs_simplex(&cert, &hs).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("resolution", cert.h())?;
        d.set_item("component_count", cert.component_count())?;
        d.set_item("measure", cert.measure())?;
        d.set_item("hull_vertices", lists(cert.hull_vertices()))?;
        d.set_item("hausdorff", distance)?;
        d.set_item("threshold", hollow::hausdorff_threshold(self.inner.dim(), cert.h()))?;
        Ok(d)
    }

    /// Largest spread of each hollow-simplex vertex over random restarts.
    #[pyo3(signature = (restarts = 10, seed = 0))]
    fn uniqueness_probe(&self, restarts: usize, seed: u64) -> PyResult<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(critical::uniqueness_probe(&self.inner, restarts, &mut rng)
            .map_err(err)?
            .deviations)
    }

    fn __repr__(&self) -> String {
        format!("CriticalFamily(n={}, dim={})", self.inner.n(), self.inner.dim())
    }
}

/// Criticality verdict as a dict with a `"status"` key: `"critical"` (with
/// `"family"`), `"too_many_bodies"`, `"empty_subfamily"`, `"common_point"`
/// or `"borderline"`.
#[pyfunction]
#[pyo3(signature = (bodies, tol = DEFAULT_TOL))]
fn check_critical<'py>(py: Python<'py>, bodies: Vec<PyRef<'py, PyBody>>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let bodies = unwrap_bodies(&bodies);
    let verdict = critical::check_critical(&bodies, tol).map_err(err)?;
    let d = PyDict::new(py);
    match verdict {
        Criticality::Critical(f) => {
            d.set_item("status", "critical")?;
            d.set_item("n", f.n())?;
            d.set_item("family", PyCriticalFamily { inner: f })?;
        }
        Criticality::TooManyBodies(r) => {
            d.set_item("status", "too_many_bodies")?;
            d.set_item("message", r.to_string())?;
        }
        Criticality::EmptySubfamily { index, certificate } => {
            d.set_item("status", "empty_subfamily")?;
            d.set_item("index", index)?;
            d.set_item("gap", certificate.gap)?;
        }
        Criticality::CommonPoint(p) => {
            d.set_item("status", "common_point")?;
            d.set_item("point", list(&p))?;
        }
        Criticality::Borderline { index, gap, threshold } => {
            d.set_item("status", "borderline")?;
            d.set_item("index", index)?;
            d.set_item("gap", gap)?;
            d.set_item("threshold", threshold)?;
        }
    }
    Ok(d)
}

/// `(distance, nearest_in_a, nearest_in_b)`.
#[pyfunction]
fn min_distance(a: PyRef<'_, PyBody>, b: PyRef<'_, PyBody>) -> PyResult<(f64, Vec<f64>, Vec<f64>)> {
    let r = opt::min_distance(&a.inner, &b.inner).map_err(err)?;
    Ok((r.distance, list(&r.nearest_a), list(&r.nearest_b)))
}

/// A common point, or `None` when the bodies are certified disjoint.
#[pyfunction]
#[pyo3(signature = (bodies, tol = DEFAULT_TOL))]
fn intersect_witness(bodies: Vec<PyRef<'_, PyBody>>, tol: f64) -> PyResult<Option<Vec<f64>>> {
    match opt::intersect_witness(&unwrap_bodies(&bodies), tol).map_err(err)? {
        FeasibilityReport::Witness(w) => Ok(Some(list(&w))),
        FeasibilityReport::Empty(_) => Ok(None),
    }
}

/// `(part1, part2, crossing_point)` for exactly `d + 2` points.
#[pyfunction]
fn radon_partition(points: Vec<Vec<f64>>) -> PyResult<(Vec<usize>, Vec<usize>, Vec<f64>)> {
    let r = geom::radon_partition(&pts(points)).map_err(err)?;
    Ok((r.part1, r.part2, list(&r.crossing_point)))
}

/// Common point of the bodies from leave-one-out witnesses, by Sperner
/// subdivision of the witness simplex.
#[pyfunction]
#[pyo3(signature = (bodies, witnesses, tol = 1e-6))]
fn klee_solve<'py>(
    py: Python<'py>,
    bodies: Vec<PyRef<'py, PyBody>>,
    witnesses: Vec<Vec<f64>>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let sol = sperner::klee_solve(&unwrap_bodies(&bodies), &pts(witnesses), tol, &KleeOptions::default())
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("point", list(&sol.point))?;
    let method = match sol.method {
        KleeMethod::Single => "single",
        KleeMethod::Helly => "helly",
        KleeMethod::Sentinel => "sentinel",
        KleeMethod::Rainbow { .. } => "rainbow",
    };
    d.set_item("method", method)?;
    d.set_item("rounds", sol.rounds)?;
    d.set_item("cells", sol.cells)?;
    Ok(d)
}

/// Checks the KKM condition for `Γ(points[i]) = images[i]`.
#[pyfunction]
#[pyo3(signature = (points, images, samples = 256, tol = DEFAULT_TOL))]
fn kkm_verify<'py>(
    py: Python<'py>,
    points: Vec<Vec<f64>>,
    images: Vec<PyRef<'py, PyBody>>,
    samples: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = KkmInstance::new(pts(points), unwrap_bodies(&images)).map_err(err)?;
    let report = sperner::kkm_verify(&inst, samples, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("holds", report.kkm_holds)?;
    d.set_item("counterexample", report.counterexample.map(|c| (c.subset, list(&c.point))))?;
    d.set_item("intersection_witness", report.intersection_witness.as_ref().map(list))?;
    Ok(d)
}

/// `(a_ok, b_ok)` for the stabbing pair `W = w_base + span(w_dirs)`,
/// `V = v_base + span(v_dirs)`.
#[pyfunction]
#[pyo3(signature = (bodies, witnesses, w_base, w_dirs, v_base, v_dirs, tol = DEFAULT_TOL))]
fn verify_stabbing(
    bodies: Vec<PyRef<'_, PyBody>>,
    witnesses: Vec<Vec<f64>>,
    w_base: Vec<f64>,
    w_dirs: Vec<Vec<f64>>,
    v_base: Vec<f64>,
    v_dirs: Vec<Vec<f64>>,
    tol: f64,
) -> PyResult<(bool, bool)> {
    let w = AffineSubspace::new(pt(w_base), pts(w_dirs)).map_err(err)?;
    let v = AffineSubspace::new(pt(v_base), pts(v_dirs)).map_err(err)?;
    let pair = StabbingPair::new(w, v).map_err(err)?;
    let r = hollow::verify_stabbing(&pair, &unwrap_bodies(&bodies), &pts(witnesses), tol).map_err(err)?;
    Ok((r.a_ok, r.b_ok))
}

fn wrap(bodies: Vec<Body>) -> Vec<PyBody> {
    bodies.into_iter().map(|inner| PyBody { inner }).collect()
}

/// Unit disks at the corners of an equilateral triangle.
#[pyfunction]
fn three_disks(side: f64) -> Vec<PyBody> {
    wrap(families::three_disks(side))
}

/// Sides of the triangle (0,0), (4,0), (2,3) thickened to strips.
#[pyfunction]
fn thickened_triangle(width: f64) -> Vec<PyBody> {
    wrap(families::thickened_triangle(width))
}

/// `[0,1]` and `[2,3]` on the line.
#[pyfunction]
fn interval_pair() -> Vec<PyBody> {
    wrap(families::interval_pair())
}

#[pymodule]
fn pyhollowkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HollowkitError", m.py().get_type::<HollowkitError>())?;
    m.add("DEFAULT_TOL", DEFAULT_TOL)?;
    m.add_class::<PyBody>()?;
    m.add_class::<PyCriticalFamily>()?;
    m.add_function(wrap_pyfunction!(check_critical, m)?)?;
    m.add_function(wrap_pyfunction!(min_distance, m)?)?;
    m.add_function(wrap_pyfunction!(intersect_witness, m)?)?;
    m.add_function(wrap_pyfunction!(radon_partition, m)?)?;
    m.add_function(wrap_pyfunction!(klee_solve, m)?)?;
    m.add_function(wrap_pyfunction!(kkm_verify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_stabbing, m)?)?;
    m.add_function(wrap_pyfunction!(three_disks, m)?)?;
    m.add_function(wrap_pyfunction!(thickened_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(interval_pair, m)?)?;
    Ok(())
}
