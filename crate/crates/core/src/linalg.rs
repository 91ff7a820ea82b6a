//! Small dense complex-matrix helpers: unitarity checks, determinants and a
//! matrix exponential. The exponential is a scaling-and-squaring Taylor
//! evaluation kept only as a cross-check for the closed-form coherent-vector
//! construction; production paths never call it.

use ndarray::Array2;
use num_complex::Complex64;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> Array2<Complex64> {
    Array2::from_diag_elem(dim, ONE)
}

pub fn adjoint(a: &Array2<Complex64>) -> Array2<Complex64> {
    a.t().mapv(|x| x.conj())
}

/// max |(U^dagger U - I)_{ij}|.
pub fn unitarity_defect(u: &Array2<Complex64>) -> f64 {
    let gram = adjoint(u).dot(u);
    let dim = u.nrows();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let expect = if i == j { ONE } else { ZERO };
            worst = worst.max((gram[[i, j]] - expect).norm());
        }
    }
    worst
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &Array2<Complex64>) -> Complex64 {
    let dim = a.nrows();
    assert_eq!(dim, a.ncols(), "determinant requires a square matrix");
    let mut m = a.clone();
    let mut det = ONE;
    for col in 0..dim {
        let mut pivot = col;
        for row in col + 1..dim {
            if m[[row, col]].norm() > m[[pivot, col]].norm() {
                pivot = row;
            }
        }
        if m[[pivot, col]].norm() == 0.0 {
            return ZERO;
        }
        if pivot != col {
            for k in 0..dim {
                let tmp = m[[col, k]];
                m[[col, k]] = m[[pivot, k]];
                m[[pivot, k]] = tmp;
            }
            det = -det;
        }
        let piv = m[[col, col]];
        det *= piv;
        for row in col + 1..dim {
            let factor = m[[row, col]] / piv;
            for k in col..dim {
                let sub = factor * m[[col, k]];
                m[[row, k]] -= sub;
            }
        }
    }
    det
}

/// Frobenius norm.
pub fn fro_norm(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// exp(A) by scaling and squaring with a Taylor series run to term-wise
/// convergence below 1e-16 relative; accurate to ~1e-13 for the moderate
/// norms used in tests.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let dim = a.nrows();
    assert_eq!(dim, a.ncols(), "expm requires a square matrix");
    let norm = a.iter().map(|x| x.norm()).fold(0.0f64, f64::max) * dim as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new((0.5f64).powi(squarings as i32) / 0.5, 0.0) * 0.5;
    let scaled = a.mapv(|x| x * scale);

    let mut result = identity(dim);
    let mut term = identity(dim);
    for k in 1..200 {
        term = term.dot(&scaled) / Complex64::new(k as f64, 0.0);
        result += &term;
        let tnorm = fro_norm(&term);
        if tnorm < 1e-18 * fro_norm(&result).max(1.0) {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}
