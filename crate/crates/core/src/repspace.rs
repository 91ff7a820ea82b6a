//! The level-N representation space of SU(n+1) on CP^n: coherent vectors,
//! the overlap kernel, ladder generators and the symmetric-power group
//! action, together with the covariance of coherent vectors under it.
//!
//! All kernels use the un-normalized coherent vectors; normalization is a
//! separate, explicit step so that nothing is normalized twice. The inner
//! product is conjugate-linear in the first argument throughout.

use std::collections::HashMap;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{chart_pairing, ChartImage, ChartPoint};
use crate::linalg;
use crate::model::{factorial, ModelConfig, MultiIndex};

/// Dense coefficient vector over the monomial multi-index basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentVector {
    coeffs: Vec<Complex64>,
}

impl CoherentVector {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Hermitian inner product, conjugate-linear in `self`.
    pub fn inner(&self, other: &CoherentVector) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// Dense complex operator on the representation space.
#[derive(Debug, Clone, PartialEq)]
pub struct LinOperator {
    matrix: Array2<Complex64>,
}

impl LinOperator {
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: linalg::identity(dim),
        }
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Operator product self * other.
    pub fn compose(&self, other: &LinOperator) -> Result<LinOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(LinOperator {
            matrix: self.matrix.dot(&other.matrix),
        })
    }

    pub fn apply(&self, v: &CoherentVector) -> Result<CoherentVector> {
        if self.dim() != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.dim(),
            });
        }
        let coeffs = (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| self.matrix[[i, j]] * v.coeffs[j])
                    .sum()
            })
            .collect();
        Ok(CoherentVector { coeffs })
    }

    pub fn adjoint(&self) -> LinOperator {
        LinOperator {
            matrix: linalg::adjoint(&self.matrix),
        }
    }
}

/// An element of SU(n+1), validated to be special unitary at construction.
#[derive(Debug, Clone)]
pub struct GroupElement {
    matrix: Array2<Complex64>,
}

const UNITARY_TOL: f64 = 1e-12;

impl GroupElement {
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let defect = linalg::unitarity_defect(&matrix);
        let det_defect = (linalg::determinant(&matrix) - Complex64::new(1.0, 0.0)).norm();
        if defect > UNITARY_TOL || det_defect > UNITARY_TOL {
            return Err(Error::NotSpecialUnitary {
                defect: defect.max(det_defect),
                tol: UNITARY_TOL,
            });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        GroupElement::new(self.matrix.dot(&other.matrix))
    }
}

/// Un-normalized coherent vector: coefficient
/// sqrt(N!/(alpha!(N-|alpha|)!)) Z^alpha at multi-index alpha. At Z = 0 this
/// is the lowest-weight basis vector (1, 0, ..., 0).
pub fn coherent_vector(cfg: &ModelConfig, z: &ChartPoint) -> CoherentVector {
    let coeffs = cfg
        .basis()
        .iter()
        .enumerate()
        .map(|(k, alpha)| {
            let mut mono = Complex64::new(1.0, 0.0);
            for (i, &a) in alpha.iter().enumerate() {
                if a > 0 {
                    mono *= z.coords()[i].powu(a as u32);
                }
            }
            mono * cfg.coherent_coeff_sqrt(k)
        })
        .collect();
    CoherentVector { coeffs }
}

/// Unit-normalized copy of a vector.
pub fn normalize(v: &CoherentVector) -> Result<CoherentVector> {
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(CoherentVector {
        coeffs: v.coeffs.iter().map(|c| c / norm).collect(),
    })
}

/// Closed-form overlap (e_W, e_Z) = (1 + <W,Z>)^N, conjugate-linear in W.
pub fn overlap(cfg: &ModelConfig, w: &ChartPoint, z: &ChartPoint) -> Complex64 {
    (Complex64::new(1.0, 0.0) + chart_pairing(w, z)).powu(cfg.level() as u32)
}

/// Squared norm of the coherent vector at Z, (1 + |Z|^2)^N.
pub fn coherent_norm_sqr(cfg: &ModelConfig, z: &ChartPoint) -> f64 {
    (1.0 + z.norm_sqr()).powi(cfg.level() as i32)
}

/// Membership in the polar divisor of e_W: true iff |(e_W, e_Z)| falls
/// below `tol` times the norm product |e_W| |e_Z|. For comparisons against
/// the cut-locus predicate, pass [`cut_matched_tolerance`] of the angle
/// tolerance, which accounts for the N-th power between the two scales.
pub fn polar_divisor_member(cfg: &ModelConfig, w: &ChartPoint, z: &ChartPoint, tol: f64) -> bool {
    assert!(tol > 0.0, "polar-divisor tolerance must be positive");
    let ov = overlap(cfg, w, z).norm();
    let norms = (coherent_norm_sqr(cfg, w) * coherent_norm_sqr(cfg, z)).sqrt();
    ov < tol * norms
}

/// The polar-divisor tolerance that makes `polar_divisor_member` the same
/// predicate as `geometry::in_cut_locus` with angle tolerance `tol`: the
/// level-N overlap is the level-1 overlap to the N-th power, so the matched
/// threshold is sin(tol)^N.
pub fn cut_matched_tolerance(cfg: &ModelConfig, tol: f64) -> f64 {
    tol.sin().powi(cfg.level() as i32)
}

/// Ladder generators per coordinate direction: `raising[i]` moves a quantum
/// from the reference mode into direction i, `lowering[i]` moves it back,
/// and `cartan[i]` is the diagonal weight difference. The lowering
/// operators annihilate the lowest-weight vector e_0, and
/// exp(sum Z_i raising[i]) e_0 reproduces `coherent_vector`.
pub struct Generators {
    pub raising: Vec<LinOperator>,
    pub lowering: Vec<LinOperator>,
    pub cartan: Vec<LinOperator>,
}

pub fn generators(cfg: &ModelConfig) -> Generators {
    let dim = cfg.dimension();
    let level = cfg.level();
    let zero = Complex64::new(0.0, 0.0);
    let mut raising = Vec::with_capacity(cfg.n());
    let mut lowering = Vec::with_capacity(cfg.n());
    let mut cartan = Vec::with_capacity(cfg.n());

    for dir in 0..cfg.n() {
        let mut up = Array2::from_elem((dim, dim), zero);
        let mut down = Array2::from_elem((dim, dim), zero);
        let mut diag = Array2::from_elem((dim, dim), zero);
        for (col, alpha) in cfg.basis().iter().enumerate() {
            let occupied: usize = alpha.iter().sum();
            let k0 = level - occupied;
            // raising: alpha -> alpha + e_dir with amplitude sqrt((a+1) k0)
            if k0 > 0 {
                let mut target = alpha.clone();
                target[dir] += 1;
                let row = cfg.index_of(&target).expect("raised index in basis");
                let amp = (((alpha[dir] + 1) * k0) as f64).sqrt();
                up[[row, col]] = Complex64::new(amp, 0.0);
            }
            // lowering: alpha -> alpha - e_dir with amplitude sqrt(a (k0+1))
            if alpha[dir] > 0 {
                let mut target = alpha.clone();
                target[dir] -= 1;
                let row = cfg.index_of(&target).expect("lowered index in basis");
                let amp = ((alpha[dir] * (k0 + 1)) as f64).sqrt();
                down[[row, col]] = Complex64::new(amp, 0.0);
            }
            diag[[col, col]] = Complex64::new(alpha[dir] as f64 - k0 as f64, 0.0);
        }
        raising.push(LinOperator { matrix: up });
        lowering.push(LinOperator { matrix: down });
        cartan.push(LinOperator { matrix: diag });
    }
    Generators {
        raising,
        lowering,
        cartan,
    }
}

/// Spin components for n = 1 at level N (spin N/2):
/// Sx = (F+ + F-)/2, Sy = (F+ - F-)/(2i), Sz = diag(alpha - N/2).
pub fn spin_operators(cfg: &ModelConfig) -> Result<(LinOperator, LinOperator, LinOperator)> {
    if cfg.n() != 1 {
        return Err(Error::UnsupportedDimension { n: cfg.n() });
    }
    let gens = generators(cfg);
    let up = &gens.raising[0].matrix;
    let down = &gens.lowering[0].matrix;
    let half = Complex64::new(0.5, 0.0);
    let half_over_i = Complex64::new(0.0, -0.5);
    let sx = LinOperator {
        matrix: (up + down).mapv(|x| x * half),
    };
    let sy = LinOperator {
        matrix: (up - down).mapv(|x| x * half_over_i),
    };
    let sz = LinOperator {
        matrix: gens.cartan[0].matrix.mapv(|x| x * half),
    };
    Ok((sx, sy, sz))
}

/// N-th symmetric power of g in the monomial basis. Values are obtained by
/// expanding the substituted monomials, so the result is a group
/// homomorphism and unitary up to rounding.
pub fn group_action_matrix(cfg: &ModelConfig, g: &GroupElement) -> Result<LinOperator> {
    let modes = cfg.n() + 1;
    if g.size() != modes {
        return Err(Error::DimensionMismatch {
            expected: modes,
            got: g.size(),
        });
    }
    let dim = cfg.dimension();
    let level = cfg.level();
    let mut out = Array2::from_elem((dim, dim), Complex64::new(0.0, 0.0));

    for (col, alpha) in cfg.basis().iter().enumerate() {
        let full = full_exponent(alpha, level);
        // Expand prod_j (sum_i g[i][j] y_i)^(k_j) over monomials in y.
        let mut poly: HashMap<Vec<usize>, Complex64> = HashMap::new();
        poly.insert(vec![0usize; modes], Complex64::new(1.0, 0.0));
        for (j, &kj) in full.iter().enumerate() {
            for _ in 0..kj {
                let mut next: HashMap<Vec<usize>, Complex64> = HashMap::new();
                for (mono, coeff) in &poly {
                    for i in 0..modes {
                        let gij = g.matrix[[i, j]];
                        if gij.norm_sqr() == 0.0 {
                            continue;
                        }
                        let mut bumped = mono.clone();
                        bumped[i] += 1;
                        *next
                            .entry(bumped)
                            .or_insert_with(|| Complex64::new(0.0, 0.0)) += coeff * gij;
                    }
                }
                poly = next;
            }
        }
        let col_norm = exponent_factorial(&full).sqrt();
        for (mono, coeff) in poly {
            let row_alpha: MultiIndex = mono[1..].to_vec();
            let row = cfg
                .index_of(&row_alpha)
                .expect("expanded monomial stays at total degree N");
            let row_norm = exponent_factorial(&mono).sqrt();
            out[[row, col]] += coeff * (row_norm / col_norm);
        }
    }
    Ok(LinOperator { matrix: out })
}

fn full_exponent(alpha: &[usize], level: usize) -> Vec<usize> {
    let occupied: usize = alpha.iter().sum();
    let mut full = Vec::with_capacity(alpha.len() + 1);
    full.push(level - occupied);
    full.extend_from_slice(alpha);
    full
}

fn exponent_factorial(exps: &[usize]) -> f64 {
    exps.iter().map(|&k| factorial(k)).product()
}

/// Fractional-linear action of g on the chart: the projective-linear action
/// on the homogeneous lift (1, Z), flagged when the image leaves the chart.
pub fn chart_action(g: &GroupElement, z: &ChartPoint) -> ChartImage {
    let lift = z.lift();
    let modes = g.size();
    assert_eq!(lift.len(), modes, "group element size must be n + 1");
    let image: Vec<Complex64> = (0..modes)
        .map(|i| (0..modes).map(|j| g.matrix[[i, j]] * lift[j]).sum())
        .collect();
    let total: f64 = image.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    if image[0].norm() <= crate::geometry::CHART_ESCAPE_TOL * total {
        return ChartImage::AtInfinity;
    }
    let coords = image[1..].iter().map(|w| w / image[0]).collect();
    ChartImage::Inside(ChartPoint::new(coords).expect("finite chart image"))
}

/// Deviation of the coherent family from exact covariance:
/// 1 - |(Pi(g) e_Z, e_{g.Z})| / (|Pi(g) e_Z| |e_{g.Z}|). Exact covariance
/// (the vectors agree up to a scalar) makes this vanish.
pub fn covariance_defect(cfg: &ModelConfig, g: &GroupElement, z: &ChartPoint) -> Result<f64> {
    let moved = match chart_action(g, z) {
        ChartImage::Inside(p) => p,
        ChartImage::AtInfinity => return Err(Error::OutsideChart),
    };
    let pi = group_action_matrix(cfg, g)?;
    let transported = pi.apply(&coherent_vector(cfg, z))?;
    let target = coherent_vector(cfg, &moved);
    let cross = transported.inner(&target).norm();
    Ok(1.0 - cross / (transported.norm() * target.norm()))
}
