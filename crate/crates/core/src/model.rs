//! Model configuration: the pair (n, N) fixing CP^n and the line-bundle
//! level N, together with the monomial multi-index basis of the associated
//! representation space.
//!
//! The representation space at level N has dimension C(n+N, n) and is
//! spanned by multi-indices alpha in N^n with |alpha| <= N, enumerated in
//! graded-lexicographic order (total degree first, then lexicographic on
//! the component tuple). The un-normalized coherent vector attached to a
//! chart point Z carries the coefficient sqrt(N!/(alpha! (N-|alpha|)!)) Z^alpha
//! at index alpha.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A multi-index alpha in N^n; `alpha[i]` is the exponent of coordinate i.
pub type MultiIndex = Vec<usize>;

/// Fixed model data: complex dimension `n`, level `level` (the Planck
/// parameter is h = 1/level), plus the cached basis tables.
///
/// Construction is the only place the tables are built; afterwards the
/// config is read-only and safe to share across threads.
#[derive(Debug, Clone)]
pub struct ModelConfig {
    n: usize,
    level: usize,
    basis: Vec<MultiIndex>,
    /// sqrt(N!/(alpha!(N-|alpha|)!)) per basis index.
    coeff_sqrt: Vec<f64>,
    index: HashMap<MultiIndex, usize>,
}

impl ModelConfig {
    pub fn new(n: usize, level: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if level < 1 {
            return Err(Error::InvalidConfig("level must be at least 1".into()));
        }
        let basis = enumerate_basis(n, level);
        let coeff_sqrt = basis
            .iter()
            .map(|alpha| multinomial_sqrt(level, alpha))
            .collect();
        let index = basis
            .iter()
            .enumerate()
            .map(|(k, alpha)| (alpha.clone(), k))
            .collect();
        Ok(Self {
            n,
            level,
            basis,
            coeff_sqrt,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Dimension of the representation space, C(n+N, n).
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The multi-index basis in graded-lexicographic order.
    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    /// sqrt(N!/(alpha!(N-|alpha|)!)) for basis index `k`.
    pub fn coherent_coeff_sqrt(&self, k: usize) -> f64 {
        self.coeff_sqrt[k]
    }

    /// Position of a multi-index in the basis, if present.
    pub fn index_of(&self, alpha: &[usize]) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    pub fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got,
            });
        }
        Ok(())
    }
}

/// All multi-indices of n non-negative integers with |alpha| <= level,
/// graded-lexicographic: ascending total degree, then ascending
/// lexicographic comparison of the tuples.
fn enumerate_basis(n: usize, level: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for degree in 0..=level {
        let mut alpha = vec![0usize; n];
        emit_degree(n, degree, 0, &mut alpha, &mut out);
    }
    out
}

fn emit_degree(
    n: usize,
    remaining: usize,
    pos: usize,
    alpha: &mut MultiIndex,
    out: &mut Vec<MultiIndex>,
) {
    if pos == n - 1 {
        alpha[pos] = remaining;
        out.push(alpha.clone());
        return;
    }
    for v in 0..=remaining {
        alpha[pos] = v;
        emit_degree(n, remaining - v, pos + 1, alpha, out);
    }
    alpha[pos] = 0;
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Binomial coefficient C(a, b) as f64.
pub fn binomial(a: usize, b: usize) -> f64 {
    if b > a {
        return 0.0;
    }
    let b = b.min(a - b);
    let mut acc = 1.0f64;
    for i in 0..b {
        acc = acc * (a - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// sqrt of the multinomial N!/(alpha!(N-|alpha|)!).
fn multinomial_sqrt(level: usize, alpha: &[usize]) -> f64 {
    let total: usize = alpha.iter().sum();
    debug_assert!(total <= level);
    let mut acc = factorial(level) / factorial(level - total);
    for &a in alpha {
        acc /= factorial(a);
    }
    acc.sqrt()
}
