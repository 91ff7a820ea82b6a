//! Two-point and characteristic functions, Calabi diastasis, the
//! coherent-state embedding into projective Hilbert space with its isometry
//! check, and the vanishing multiplicity of the overlap along the polar
//! divisor.
//!
//! The two-point function is computed from coherent-vector coefficients,
//! the characteristic function from the analytically continued closed-form
//! kernel; regularity of the quantization makes the two agree. The
//! diastasis is -2 log of the characteristic function, with an independent
//! potential-combination route for cross-checking.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{self, geodesic_distance, ChartPoint, ProjectiveRay};
use crate::model::{binomial, factorial, ModelConfig};
use crate::quantize::DOMAIN_TOL;
use crate::repspace;

/// Coefficient-route overlaps of exact cut pairs land at summation
/// roundoff instead of zero; ray-side cut classifications floor their
/// threshold at this noise scale.
pub const RAY_OVERLAP_FLOOR: f64 = 1e-13;

/// Transition probability between the coherent states at x and y:
/// |(e_x, e_y)|^2 / (|e_x|^2 |e_y|^2), computed from coefficient vectors.
/// Symmetric, in [0, 1], equal to 1 exactly when x = y, and equal to
/// cos^(2N) of the geodesic distance.
pub fn two_point(cfg: &ModelConfig, x: &ChartPoint, y: &ChartPoint) -> f64 {
    let ex = repspace::coherent_vector(cfg, x);
    let ey = repspace::coherent_vector(cfg, y);
    let cross = ex.inner(&ey).norm_sqr();
    (cross / (ex.norm_sqr() * ey.norm_sqr())).clamp(0.0, 1.0)
}

/// Characteristic function through the analytic continuation of the
/// closed-form kernel, oriented so that it stays in [0, 1] and the
/// diastasis -2 log of it is nonnegative. Defined only for y off the cut
/// locus of x; on the rest of the chart it coincides with the two-point
/// function (the quantization is regular).
pub fn characteristic(cfg: &ModelConfig, x: &ChartPoint, y: &ChartPoint) -> Result<f64> {
    if geometry::in_cut_locus(x, y, DOMAIN_TOL) {
        return Err(cut_locus_error(cfg, x, y));
    }
    let continued = repspace::overlap(cfg, x, y).norm_sqr();
    let diag = repspace::overlap(cfg, x, x).re * repspace::overlap(cfg, y, y).re;
    Ok((continued / diag).clamp(0.0, 1.0))
}

/// Calabi diastasis D = -2 log of the characteristic function;
/// nonnegative, zero exactly on the diagonal, divergent toward the cut
/// locus of x.
pub fn diastasis(cfg: &ModelConfig, x: &ChartPoint, y: &ChartPoint) -> Result<f64> {
    Ok(-2.0 * characteristic(cfg, x, y)?.ln())
}

/// Independent diastasis route through the analytically continued
/// potential: 2 [Phi(x) + Phi(y) - 2N Re Log(1 + <y, x>)], with Phi the
/// level-N Kahler potential.
pub fn diastasis_potential_route(
    cfg: &ModelConfig,
    x: &ChartPoint,
    y: &ChartPoint,
) -> Result<f64> {
    if geometry::in_cut_locus(x, y, DOMAIN_TOL) {
        return Err(cut_locus_error(cfg, x, y));
    }
    let cross = Complex64::new(1.0, 0.0) + geometry::chart_pairing(y, x);
    let level = cfg.level() as f64;
    Ok(2.0
        * (geometry::kahler_potential(cfg, x) + geometry::kahler_potential(cfg, y)
            - 2.0 * level * cross.ln().re))
}

fn cut_locus_error(cfg: &ModelConfig, x: &ChartPoint, y: &ChartPoint) -> Error {
    let num = repspace::overlap(cfg, x, y).norm();
    let den = (repspace::coherent_norm_sqr(cfg, x) * repspace::coherent_norm_sqr(cfg, y)).sqrt();
    Error::CutLocusDomain {
        z: format!("{:?}", x.coords()),
        w: format!("{:?}", y.coords()),
        overlap: num / den,
    }
}

/// Two-point data at a pair: both function routes and the diastasis.
#[derive(Debug, Clone)]
pub struct DiastasisReport {
    pub x: ChartPoint,
    pub y: ChartPoint,
    pub psi: f64,
    pub psi_tilde: f64,
    pub diastasis: f64,
}

pub fn diastasis_report(cfg: &ModelConfig, x: &ChartPoint, y: &ChartPoint) -> Result<DiastasisReport> {
    let psi_tilde = characteristic(cfg, x, y)?;
    Ok(DiastasisReport {
        x: x.clone(),
        y: y.clone(),
        psi: two_point(cfg, x, y),
        psi_tilde,
        diastasis: -2.0 * psi_tilde.ln(),
    })
}

/// The coherent-state embedding: the ray of the coherent vector at Z. Its
/// first component is the constant 1 on the whole chart, so the section
/// system is base-point free there, and distinct chart points give
/// non-proportional rays.
pub fn embed(cfg: &ModelConfig, z: &ChartPoint) -> ProjectiveRay {
    ProjectiveRay::new(repspace::coherent_vector(cfg, z).coeffs().to_vec())
        .expect("coherent vectors never vanish")
}

/// Largest absolute entry difference between the pullback of the ambient
/// Fubini-Study metric along the embedding (finite differences of
/// log |e_Z|^2 through the coefficient route) and the closed-form level-N
/// metric.
pub fn isometry_defect(cfg: &ModelConfig, z: &ChartPoint) -> f64 {
    let log_norm = |coords: &[Complex64]| {
        let p = ChartPoint::new(coords.to_vec()).expect("finite shifted point");
        repspace::coherent_vector(cfg, &p).norm_sqr().ln()
    };
    let pullback = crate::numdiff::mixed_hessian(&log_norm, z.coords());
    let closed = geometry::fs_metric(cfg, z);
    let mut worst = 0.0f64;
    for i in 0..z.dim() {
        for j in 0..z.dim() {
            worst = worst.max((pullback[[i, j]] - closed[[i, j]]).norm());
        }
    }
    worst
}

/// Consistency record between the Cayley distance of embedded points and
/// the cut-locus predicate.
#[derive(Debug, Clone)]
pub struct CorollaryCheck {
    /// Cayley distance of the embedded rays.
    pub dc: f64,
    /// Cut-locus predicate at the supplied tolerance.
    pub is_cut: bool,
    /// Whether the two classifications agree.
    pub consistent: bool,
}

/// Check that the embedded Cayley distance reaches pi/2 exactly on the cut
/// locus. The ray-side classification compares the normalized ray overlap
/// (which is cos^N of the geodesic distance) against sin(tol)^N, floored
/// at the coefficient-summation noise scale.
pub fn corollary_check(
    cfg: &ModelConfig,
    x: &ChartPoint,
    y: &ChartPoint,
    tol: f64,
) -> CorollaryCheck {
    let ex = repspace::coherent_vector(cfg, x);
    let ey = repspace::coherent_vector(cfg, y);
    let ratio = ex.inner(&ey).norm() / (ex.norm() * ey.norm());
    let dc = ratio.clamp(0.0, 1.0).acos();
    let matched = tol.sin().powi(cfg.level() as i32).max(RAY_OVERLAP_FLOOR);
    let ray_says_cut = ratio <= matched;
    let is_cut = geometry::in_cut_locus(x, y, tol);
    CorollaryCheck {
        dc,
        is_cut,
        consistent: ray_says_cut == is_cut,
    }
}

/// The identity connecting the embedded Cayley distance with the geodesic
/// distance: arccos(cos^N d_g).
pub fn cayley_from_distance(cfg: &ModelConfig, x: &ChartPoint, y: &ChartPoint) -> f64 {
    geodesic_distance(x, y)
        .cos()
        .powi(cfg.level() as i32)
        .clamp(0.0, 1.0)
        .acos()
}

/// Vanishing multiplicity of t -> (e_W, e_(Zpol + t dir)) at t = 0, where
/// Zpol = -1/conj(W) is the polar point of W (n = 1). The overlap is the
/// polynomial (a + b t)^N with a = 1 + conj(W) Zpol and b = conj(W) dir,
/// so the order is read off the first derivative of non-negligible
/// magnitude; it equals the level N.
pub fn polar_vanishing_order(
    cfg: &ModelConfig,
    w: &ChartPoint,
    direction: Complex64,
) -> Result<usize> {
    if cfg.n() != 1 {
        return Err(Error::UnsupportedDimension { n: cfg.n() });
    }
    if w.norm_sqr() == 0.0 {
        // The polar point of the origin sits at infinity.
        return Err(Error::OutsideChart);
    }
    if direction.norm_sqr() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let dir = direction / direction.norm();
    let w0 = w.coords()[0];
    let z_pol = -1.0 / w0.conj();
    let a = Complex64::new(1.0, 0.0) + w0.conj() * z_pol;
    let b = w0.conj() * dir;

    let level = cfg.level();
    // k-th derivative at 0: k! C(N,k) a^(N-k) b^k.
    let derivatives: Vec<f64> = (0..=level)
        .map(|k| {
            factorial(k)
                * binomial(level, k)
                * a.norm().powi((level - k) as i32)
                * b.norm().powi(k as i32)
        })
        .collect();
    let scale = derivatives.iter().cloned().fold(0.0f64, f64::max);
    let order = derivatives
        .iter()
        .position(|d| *d > 1e-9 * scale)
        .expect("the top derivative always clears the threshold");
    Ok(order)
}
