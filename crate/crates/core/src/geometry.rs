//! Closed-form Fubini-Study geometry of CP^n in the affine chart.
//!
//! Normalization: the level-1 Kahler potential is ln(1+|Z|^2), which gives
//! the metric of diameter pi/2; the level-N form is N times the level-1
//! form. With this choice the geodesic distance coincides with the Cayley
//! distance between the homogeneous lifts (1, Z) and (1, W), which the
//! tests use as a free cross-check.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::numdiff;
use crate::repspace::LinOperator;

/// Relative threshold below which a homogeneous first coordinate counts as
/// vanished, i.e. the point left the affine chart.
pub const CHART_ESCAPE_TOL: f64 = 1e-12;

/// A point of the dense affine chart C^n of CP^n.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    coords: Vec<Complex64>,
}

impl ChartPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidConfig("chart point needs n >= 1".into()));
        }
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidConfig(
                "chart coordinates must be finite".into(),
            ));
        }
        Ok(Self { coords })
    }

    pub fn origin(n: usize) -> Self {
        Self {
            coords: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Convenience constructor for n = 1.
    pub fn one(z: Complex64) -> Self {
        Self { coords: vec![z] }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// |Z|^2 = sum |Z_i|^2.
    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Homogeneous lift (1, Z).
    pub fn lift(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.coords.len() + 1);
        out.push(Complex64::new(1.0, 0.0));
        out.extend_from_slice(&self.coords);
        out
    }
}

/// Hermitian chart pairing <W, Z> = sum conj(W_i) Z_i (conjugate-linear in
/// the first argument).
pub fn chart_pairing(w: &ChartPoint, z: &ChartPoint) -> Complex64 {
    w.coords
        .iter()
        .zip(&z.coords)
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// A holomorphic tangent vector attached to a chart point.
#[derive(Debug, Clone)]
pub struct TangentVector {
    pub base: ChartPoint,
    pub components: Vec<Complex64>,
}

impl TangentVector {
    pub fn new(base: ChartPoint, components: Vec<Complex64>) -> Result<Self> {
        if components.len() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                got: components.len(),
            });
        }
        Ok(Self { base, components })
    }

    /// Squared norm with the level-1 Fubini-Study metric at the base point.
    pub fn fs_norm_sqr(&self) -> f64 {
        let t = self.base.norm_sqr();
        let v2: f64 = self.components.iter().map(|v| v.norm_sqr()).sum();
        let zv: Complex64 = self
            .base
            .coords()
            .iter()
            .zip(&self.components)
            .map(|(z, v)| z.conj() * v)
            .sum();
        (v2 * (1.0 + t) - zv.norm_sqr()) / ((1.0 + t) * (1.0 + t))
    }
}

/// A ray of projective Hilbert space, stored through any nonzero
/// representative; two rays are equal iff the representatives are
/// proportional.
#[derive(Debug, Clone)]
pub struct ProjectiveRay {
    homogeneous: Vec<Complex64>,
}

impl ProjectiveRay {
    pub fn new(homogeneous: Vec<Complex64>) -> Result<Self> {
        if homogeneous.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { homogeneous })
    }

    pub fn components(&self) -> &[Complex64] {
        &self.homogeneous
    }
}

/// Image of a chart-valued map: either a chart point or the explicit
/// point-at-infinity flag. The flag is never conflated with large
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartImage {
    Inside(ChartPoint),
    AtInfinity,
}

impl ChartImage {
    pub fn is_at_infinity(&self) -> bool {
        matches!(self, ChartImage::AtInfinity)
    }

    pub fn point(&self) -> Option<&ChartPoint> {
        match self {
            ChartImage::Inside(p) => Some(p),
            ChartImage::AtInfinity => None,
        }
    }
}

/// Kahler potential at level N: Phi_N(Z) = N ln(1 + |Z|^2).
pub fn kahler_potential(cfg: &ModelConfig, z: &ChartPoint) -> f64 {
    cfg.level() as f64 * (1.0 + z.norm_sqr()).ln()
}

/// Closed-form Fubini-Study metric at level N:
/// g_{i jbar} = N [ (1+|Z|^2) delta_ij - conj(Z_i) Z_j ] / (1+|Z|^2)^2.
pub fn fs_metric(cfg: &ModelConfig, z: &ChartPoint) -> Array2<Complex64> {
    let n = z.dim();
    let t = z.norm_sqr();
    let denom = (1.0 + t) * (1.0 + t);
    let scale = cfg.level() as f64 / denom;
    let mut g = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            let kron = if i == j { 1.0 + t } else { 0.0 };
            g[[i, j]] = (Complex64::new(kron, 0.0) - z.coords[i].conj() * z.coords[j]) * scale;
        }
    }
    g
}

/// Geodesic exponential map in the diameter-pi/2 normalization, via the
/// horizontal lift to the unit sphere of C^(n+1):
/// gamma(t) = cos(t s) p + sin(t s) u with s the level-1 speed of V.
/// Returns the point-at-infinity flag when the homogeneous first coordinate
/// vanishes (the image left the chart).
pub fn geodesic_exp(v: &TangentVector, t: f64) -> ChartImage {
    let speed = v.fs_norm_sqr().sqrt();
    if speed == 0.0 {
        return ChartImage::Inside(v.base.clone());
    }
    let lift = v.base.lift();
    let lift_norm = (1.0 + v.base.norm_sqr()).sqrt();
    let p_hat: Vec<Complex64> = lift.iter().map(|c| c / lift_norm).collect();

    // Horizontal projection of the lifted velocity (0, V)/|lift|.
    let mut w: Vec<Complex64> = Vec::with_capacity(p_hat.len());
    w.push(Complex64::new(0.0, 0.0));
    w.extend(v.components.iter().map(|c| c / lift_norm));
    let overlap: Complex64 = p_hat.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
    let h: Vec<Complex64> = w
        .iter()
        .zip(&p_hat)
        .map(|(wi, pi)| wi - overlap * pi)
        .collect();
    let h_norm = h.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();

    let angle = t * speed;
    let (s, c) = angle.sin_cos();
    let gamma: Vec<Complex64> = p_hat
        .iter()
        .zip(&h)
        .map(|(pi, hi)| pi * c + hi * (s / h_norm))
        .collect();

    let total: f64 = gamma.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    if gamma[0].norm() <= CHART_ESCAPE_TOL * total {
        return ChartImage::AtInfinity;
    }
    let coords = gamma[1..].iter().map(|g| g / gamma[0]).collect();
    ChartImage::Inside(ChartPoint { coords })
}

/// Geodesic distance, closed form:
/// d = arccos( |1 + <W,Z>| / sqrt((1+|Z|^2)(1+|W|^2)) ), in [0, pi/2].
pub fn geodesic_distance(z: &ChartPoint, w: &ChartPoint) -> f64 {
    let num = (Complex64::new(1.0, 0.0) + chart_pairing(w, z)).norm_sqr();
    let den = (1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr());
    let ratio2 = (num / den).clamp(0.0, 1.0);
    ratio2.sqrt().acos()
}

/// Cut-locus predicate: true iff W sits at maximal geodesic distance from Z,
/// i.e. d(Z, W) >= pi/2 - tol, tested as |1 + <W,Z>| <= sin(tol) * norms so
/// that the overlap route and the distance route are the same comparison.
pub fn in_cut_locus(z: &ChartPoint, w: &ChartPoint, tol: f64) -> bool {
    assert!(tol > 0.0, "cut-locus tolerance must be positive");
    let num = (Complex64::new(1.0, 0.0) + chart_pairing(w, z)).norm_sqr();
    let den = (1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr());
    let s = tol.sin();
    num <= s * s * den
}

/// Hermitian elliptic Cayley distance between rays of projective Hilbert
/// space: arccos(|(u,v)| / (|u| |v|)), in [0, pi/2].
pub fn cayley_distance(u: &ProjectiveRay, v: &ProjectiveRay) -> Result<f64> {
    let uu: f64 = u.homogeneous.iter().map(|c| c.norm_sqr()).sum();
    let vv: f64 = v.homogeneous.iter().map(|c| c.norm_sqr()).sum();
    if uu == 0.0 || vv == 0.0 {
        return Err(Error::ZeroVector);
    }
    let uv: Complex64 = u
        .homogeneous
        .iter()
        .zip(&v.homogeneous)
        .map(|(a, b)| a.conj() * b)
        .sum();
    let ratio2 = (uv.norm_sqr() / (uu * vv)).clamp(0.0, 1.0);
    Ok(ratio2.sqrt().acos())
}

/// Poisson bracket of two covariant symbols with respect to the level-N
/// form: {a,b} = (i/N) sum_{p,q} G_{pq} (d_p a dbar_q b - d_p b dbar_q a),
/// where G_{pq} = (1+|Z|^2)(delta_pq + conj(Z_q) Z_p) is the inverse level-1
/// metric and the derivatives are central finite differences of the
/// diagonal symbols. The orientation is the one under which the bracket of
/// the normalized spin-x and spin-y symbols reproduces the spin-z symbol at
/// n = 1, N = 1.
pub fn poisson_bracket(
    cfg: &ModelConfig,
    a: &LinOperator,
    b: &LinOperator,
    z: &ChartPoint,
) -> Result<Complex64> {
    cfg.check_dim(a.dim())?;
    cfg.check_dim(b.dim())?;
    let n = z.dim();
    let t = z.norm_sqr();

    let symbol = |op: &LinOperator| {
        let op = op.clone();
        let cfg = cfg.clone();
        move |coords: &[Complex64]| -> Complex64 {
            let p = ChartPoint {
                coords: coords.to_vec(),
            };
            crate::quantize::diagonal_symbol(&cfg, &op, &p)
        }
    };
    let fa = symbol(a);
    let fb = symbol(b);

    let da: Vec<Complex64> = (0..n)
        .map(|p| numdiff::wirtinger_holo(&fa, z.coords(), p))
        .collect();
    let da_bar: Vec<Complex64> = (0..n)
        .map(|q| numdiff::wirtinger_anti(&fa, z.coords(), q))
        .collect();
    let db: Vec<Complex64> = (0..n)
        .map(|p| numdiff::wirtinger_holo(&fb, z.coords(), p))
        .collect();
    let db_bar: Vec<Complex64> = (0..n)
        .map(|q| numdiff::wirtinger_anti(&fb, z.coords(), q))
        .collect();

    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..n {
        for q in 0..n {
            let kron = if p == q { 1.0 } else { 0.0 };
            let g_inv =
                (Complex64::new(kron, 0.0) + z.coords[q].conj() * z.coords[p]) * (1.0 + t);
            sum += g_inv * (da[p] * db_bar[q] - db[p] * da_bar[q]);
        }
    }
    // Sign fixed against the spin oracle; with it the star commutator of a
    // Hermitian pair approaches the bracket from above in 1/N.
    Ok(Complex64::new(0.0, -1.0 / cfg.level() as f64) * sum)
}
