use num_complex::Complex64;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero vector is not a valid state or projective ray")]
    ZeroVector,

    #[error("matrix is not special unitary: defect {defect:.3e} exceeds {tol:.1e}")]
    NotSpecialUnitary { defect: f64, tol: f64 },

    /// The transformed point left the affine chart (its first homogeneous
    /// coordinate vanished). Callers that need a chart point should move the
    /// base point instead.
    #[error("point maps outside the affine chart (point at infinity)")]
    OutsideChart,

    /// The coherent-state overlap of the two points vanishes to tolerance:
    /// the second point lies in the cut locus of the first, where symbols,
    /// characteristic functions and the diastasis are undefined.
    #[error(
        "coherent-state overlap vanishes: {w} lies in the cut locus of {z} \
         (normalized overlap {overlap:.3e} below tolerance)"
    )]
    CutLocusDomain { z: String, w: String, overlap: f64 },

    #[error("grid quadrature supports n = 1 only, got n = {n}")]
    UnsupportedDimension { n: usize },

    #[error("monomial degree {degree} exceeds the supported table (level {level})")]
    DegreeOverflow { degree: usize, level: usize },

    #[error("angular grid too coarse: need at least {needed} points, got {got}")]
    TooFewAngularNodes { needed: usize, got: usize },

    #[error("grid rule failed its exactness check: worst defect {defect:.3e}")]
    InexactRule { defect: f64 },

    #[error("integrand returned a non-finite value {value} at node {index}")]
    NonFiniteIntegrand { index: usize, value: Complex64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
