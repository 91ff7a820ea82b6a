//! Coherent states and Berezin symbol calculus on complex projective space.
//!
//! The crate fixes a model by the pair (n, N) — the complex dimension of
//! CP^n and the line-bundle level N — and provides, in closed form wherever
//! one exists:
//!
//! * [`geometry`]: Fubini-Study potential, metric, geodesics, geodesic
//!   distance, the cut-locus predicate, the Cayley distance on projective
//!   Hilbert space, and the Poisson bracket of covariant symbols;
//! * [`repspace`]: coherent vectors over the monomial basis, the overlap
//!   kernel, ladder generators, the symmetric-power group action and its
//!   covariance;
//! * [`quadrature`]: exact monomial integrals against the Fubini-Study
//!   weight plus a verified grid rule for n = 1;
//! * [`quantize`]: the holomorphic-sector inner product, resolution of
//!   identity, covariant symbols, reproducing and two-point kernels, the
//!   star product with its operator-product oracle, the epsilon function
//!   and the semiclassical scan in N;
//! * [`kahlerfn`]: two-point and characteristic functions, the Calabi
//!   diastasis, the coherent-state embedding with its isometry check, and
//!   the vanishing multiplicity of overlaps along the polar divisor.
//!
//! Everything is a pure function of immutable inputs; configs build their
//! lookup tables once and are read-only afterwards, so concurrent use is
//! safe.

pub mod error;
pub mod geometry;
pub mod kahlerfn;
pub mod linalg;
pub mod model;
pub mod numdiff;
pub mod quadrature;
pub mod quantize;
pub mod repspace;

pub use error::{Error, Result};
pub use geometry::{ChartImage, ChartPoint, ProjectiveRay, TangentVector};
pub use model::ModelConfig;
pub use quadrature::QuadratureRule;
pub use quantize::{CorrespondenceScan, OperatorFamily, StarReport, SymbolFunction};
pub use repspace::{CoherentVector, GroupElement, LinOperator};
