//! Python bindings: a `Model` class wrapping a (n, N) configuration with
//! the main chart operations, plus module-level geometry helpers. Chart
//! points are sequences of Python complex numbers, operators are nested
//! lists (row-major).

use ndarray::Array2;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cpnlab_core::geometry::{self, ChartImage, ChartPoint, ProjectiveRay, TangentVector};
use cpnlab_core::kahlerfn;
use cpnlab_core::model::ModelConfig;
use cpnlab_core::quadrature::{self, QuadratureRule};
use cpnlab_core::quantize::{self, OperatorFamily};
use cpnlab_core::repspace::{self, LinOperator};

fn err(e: cpnlab_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn point(coords: Vec<Complex64>) -> PyResult<ChartPoint> {
    ChartPoint::new(coords).map_err(err)
}

fn operator(rows: Vec<Vec<Complex64>>) -> PyResult<LinOperator> {
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err("operator must be a square matrix"));
    }
    let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
    let matrix = Array2::from_shape_vec((dim, dim), flat)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    LinOperator::new(matrix).map_err(err)
}

fn matrix_to_rows(m: &Array2<Complex64>) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[[i, j]]).collect())
        .collect()
}

/// One star-product evaluation and its operator-product oracle.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct StarResult {
    #[pyo3(get)]
    quadrature_value: Complex64,
    #[pyo3(get)]
    oracle_value: Complex64,
    #[pyo3(get)]
    defect: f64,
}

#[pymethods]
impl StarResult {
    fn __repr__(&self) -> String {
        format!(
            "StarResult(quadrature_value={}, oracle_value={}, defect={:e})",
            self.quadrature_value, self.oracle_value, self.defect
        )
    }
}

/// The model CP^n at level N with its representation-space tables.
#[pyclass]
struct Model {
    cfg: ModelConfig,
    rule: Option<QuadratureRule>,
}

impl Model {
    fn grid_rule(&mut self) -> PyResult<&QuadratureRule> {
        if self.rule.is_none() {
            self.rule = Some(quadrature::default_grid_rule(&self.cfg).map_err(err)?);
        }
        Ok(self.rule.as_ref().expect("rule built above"))
    }
}

#[pymethods]
impl Model {
    #[new]
    fn new(n: usize, level: usize) -> PyResult<Self> {
        Ok(Self {
            cfg: ModelConfig::new(n, level).map_err(err)?,
            rule: None,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.cfg.n()
    }

    #[getter]
    fn level(&self) -> usize {
        self.cfg.level()
    }

    fn dimension(&self) -> usize {
        self.cfg.dimension()
    }

    fn kahler_potential(&self, z: Vec<Complex64>) -> PyResult<f64> {
        Ok(geometry::kahler_potential(&self.cfg, &point(z)?))
    }

    fn fs_metric(&self, z: Vec<Complex64>) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(matrix_to_rows(&geometry::fs_metric(&self.cfg, &point(z)?)))
    }

    fn coherent_vector(&self, z: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        Ok(repspace::coherent_vector(&self.cfg, &point(z)?)
            .coeffs()
            .to_vec())
    }

    fn overlap(&self, w: Vec<Complex64>, z: Vec<Complex64>) -> PyResult<Complex64> {
        Ok(repspace::overlap(&self.cfg, &point(w)?, &point(z)?))
    }

    fn polar_divisor_member(
        &self,
        w: Vec<Complex64>,
        z: Vec<Complex64>,
        tol: f64,
    ) -> PyResult<bool> {
        Ok(repspace::polar_divisor_member(
            &self.cfg,
            &point(w)?,
            &point(z)?,
            tol,
        ))
    }

    /// Polar-divisor tolerance matching the cut-locus predicate at `tol`.
    fn cut_matched_tolerance(&self, tol: f64) -> f64 {
        repspace::cut_matched_tolerance(&self.cfg, tol)
    }

    fn resolution_defect(&self) -> f64 {
        quantize::resolution_defect(&self.cfg)
    }

    fn resolution_constant(&self) -> f64 {
        quantize::resolution_constant(&self.cfg)
    }

    fn covariant_symbol(
        &self,
        a: Vec<Vec<Complex64>>,
        z: Vec<Complex64>,
        v: Vec<Complex64>,
    ) -> PyResult<Complex64> {
        quantize::covariant_symbol(&self.cfg, &operator(a)?, &point(z)?, &point(v)?).map_err(err)
    }

    fn bergman_kernel(&self, z: Vec<Complex64>, v: Vec<Complex64>) -> PyResult<Complex64> {
        Ok(quantize::bergman_kernel(&self.cfg, &point(z)?, &point(v)?))
    }

    fn kernel_g(&self, z: Vec<Complex64>, v: Vec<Complex64>) -> PyResult<f64> {
        Ok(quantize::kernel_g(&self.cfg, &point(z)?, &point(v)?))
    }

    /// Berezin star product of two operators' symbols at Z (n = 1), via
    /// the default grid rule; returns the quadrature value, the
    /// operator-product oracle and their distance.
    fn star_product(
        &mut self,
        a1: Vec<Vec<Complex64>>,
        a2: Vec<Vec<Complex64>>,
        z: Vec<Complex64>,
    ) -> PyResult<StarResult> {
        let a1 = operator(a1)?;
        let a2 = operator(a2)?;
        let z = point(z)?;
        let cfg = self.cfg.clone();
        let rule = self.grid_rule()?;
        let report = quantize::star_product(&cfg, &a1, &a2, &z, rule).map_err(err)?;
        Ok(StarResult {
            quadrature_value: report.quadrature_value,
            oracle_value: report.oracle_value,
            defect: report.defect,
        })
    }

    fn epsilon(&self, z: Vec<Complex64>) -> PyResult<f64> {
        Ok(quantize::epsilon_function(&self.cfg, &point(z)?))
    }

    fn two_point(&self, x: Vec<Complex64>, y: Vec<Complex64>) -> PyResult<f64> {
        Ok(kahlerfn::two_point(&self.cfg, &point(x)?, &point(y)?))
    }

    fn characteristic(&self, x: Vec<Complex64>, y: Vec<Complex64>) -> PyResult<f64> {
        kahlerfn::characteristic(&self.cfg, &point(x)?, &point(y)?).map_err(err)
    }

    fn diastasis(&self, x: Vec<Complex64>, y: Vec<Complex64>) -> PyResult<f64> {
        kahlerfn::diastasis(&self.cfg, &point(x)?, &point(y)?).map_err(err)
    }

    fn embed(&self, z: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        Ok(kahlerfn::embed(&self.cfg, &point(z)?).components().to_vec())
    }

    fn isometry_defect(&self, z: Vec<Complex64>) -> PyResult<f64> {
        Ok(kahlerfn::isometry_defect(&self.cfg, &point(z)?))
    }

    /// (dc, is_cut, consistent) of the embedded-distance cut test.
    fn corollary_check(
        &self,
        x: Vec<Complex64>,
        y: Vec<Complex64>,
        tol: f64,
    ) -> PyResult<(f64, bool, bool)> {
        let check = kahlerfn::corollary_check(&self.cfg, &point(x)?, &point(y)?, tol);
        Ok((check.dc, check.is_cut, check.consistent))
    }

    fn polar_vanishing_order(&self, w: Vec<Complex64>, direction: Complex64) -> PyResult<usize> {
        kahlerfn::polar_vanishing_order(&self.cfg, &point(w)?, direction).map_err(err)
    }

    /// Spin component matrices (Sx, Sy, Sz) at this level (n = 1).
    fn spin_operators(
        &self,
    ) -> PyResult<(
        Vec<Vec<Complex64>>,
        Vec<Vec<Complex64>>,
        Vec<Vec<Complex64>>,
    )> {
        let (sx, sy, sz) = repspace::spin_operators(&self.cfg).map_err(err)?;
        Ok((
            matrix_to_rows(sx.matrix()),
            matrix_to_rows(sy.matrix()),
            matrix_to_rows(sz.matrix()),
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(n={}, level={}, dimension={})",
            self.cfg.n(),
            self.cfg.level(),
            self.cfg.dimension()
        )
    }
}

/// Geodesic distance in the diameter-pi/2 normalization.
#[pyfunction]
fn geodesic_distance(z: Vec<Complex64>, w: Vec<Complex64>) -> PyResult<f64> {
    Ok(geometry::geodesic_distance(&point(z)?, &point(w)?))
}

#[pyfunction]
fn in_cut_locus(z: Vec<Complex64>, w: Vec<Complex64>, tol: f64) -> PyResult<bool> {
    Ok(geometry::in_cut_locus(&point(z)?, &point(w)?, tol))
}

/// Cayley distance between rays of projective Hilbert space.
#[pyfunction]
fn cayley_distance(u: Vec<Complex64>, v: Vec<Complex64>) -> PyResult<f64> {
    let u = ProjectiveRay::new(u).map_err(err)?;
    let v = ProjectiveRay::new(v).map_err(err)?;
    geometry::cayley_distance(&u, &v).map_err(err)
}

/// Geodesic exponential; None marks the point at infinity (the image left
/// the affine chart).
#[pyfunction]
fn geodesic_exp(
    base: Vec<Complex64>,
    components: Vec<Complex64>,
    t: f64,
) -> PyResult<Option<Vec<Complex64>>> {
    let v = TangentVector::new(point(base)?, components).map_err(err)?;
    Ok(match geometry::geodesic_exp(&v, t) {
        ChartImage::Inside(p) => Some(p.coords().to_vec()),
        ChartImage::AtInfinity => None,
    })
}

/// Deformation/commutator defects over a level schedule at a chart point
/// (n = 1). Rows are (N, d1, d2); the second value is the fitted log-log
/// slope of d1.
#[pyfunction]
fn correspondence_scan(
    levels: Vec<usize>,
    family: &str,
    z: Vec<Complex64>,
) -> PyResult<(Vec<(usize, f64, f64)>, Option<f64>)> {
    let family = match family {
        "spin-xy" => OperatorFamily::SpinXY,
        "spin-zz" => OperatorFamily::SpinZZ,
        "identity" => OperatorFamily::Identity,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown operator family '{other}'"
            )))
        }
    };
    let scan = quantize::correspondence_scan(&levels, family, &point(z)?).map_err(err)?;
    Ok((
        scan.rows.iter().map(|r| (r.level, r.d1, r.d2)).collect(),
        scan.fitted_slope,
    ))
}

#[pymodule]
fn cpnlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_class::<StarResult>()?;
    m.add_function(wrap_pyfunction!(geodesic_distance, m)?)?;
    m.add_function(wrap_pyfunction!(in_cut_locus, m)?)?;
    m.add_function(wrap_pyfunction!(cayley_distance, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic_exp, m)?)?;
    m.add_function(wrap_pyfunction!(correspondence_scan, m)?)?;
    Ok(())
}
