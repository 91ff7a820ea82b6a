//! Central finite differences in complex chart coordinates.
//!
//! Wirtinger derivatives are assembled from real partials:
//! d/dZ = (d/dx - i d/dy)/2 and d/dZbar = (d/dx + i d/dy)/2 per coordinate.
//! The step below balances truncation against rounding for f64.

use ndarray::Array2;
use num_complex::Complex64;

/// Finite-difference step shared by every derivative-based check.
pub const FD_STEP: f64 = 1e-4;

#[derive(Clone, Copy)]
enum Axis {
    Re,
    Im,
}

fn shifted(z: &[Complex64], k: usize, axis: Axis, delta: f64) -> Vec<Complex64> {
    let mut out = z.to_vec();
    match axis {
        Axis::Re => out[k] += Complex64::new(delta, 0.0),
        Axis::Im => out[k] += Complex64::new(0.0, delta),
    }
    out
}

/// d f / d Z_k of a complex-valued chart function.
pub fn wirtinger_holo<F>(f: &F, z: &[Complex64], k: usize) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64,
{
    let h = FD_STEP;
    let dx = (f(&shifted(z, k, Axis::Re, h)) - f(&shifted(z, k, Axis::Re, -h))) / (2.0 * h);
    let dy = (f(&shifted(z, k, Axis::Im, h)) - f(&shifted(z, k, Axis::Im, -h))) / (2.0 * h);
    (dx - Complex64::new(0.0, 1.0) * dy) * 0.5
}

/// d f / d Zbar_k of a complex-valued chart function.
pub fn wirtinger_anti<F>(f: &F, z: &[Complex64], k: usize) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64,
{
    let h = FD_STEP;
    let dx = (f(&shifted(z, k, Axis::Re, h)) - f(&shifted(z, k, Axis::Re, -h))) / (2.0 * h);
    let dy = (f(&shifted(z, k, Axis::Im, h)) - f(&shifted(z, k, Axis::Im, -h))) / (2.0 * h);
    (dx + Complex64::new(0.0, 1.0) * dy) * 0.5
}

fn second_partial<F>(f: &F, z: &[Complex64], i: usize, ai: Axis, j: usize, aj: Axis) -> f64
where
    F: Fn(&[Complex64]) -> f64,
{
    let h = FD_STEP;
    let same = i == j && matches!((ai, aj), (Axis::Re, Axis::Re) | (Axis::Im, Axis::Im));
    if same {
        (f(&shifted(z, i, ai, h)) - 2.0 * f(z) + f(&shifted(z, i, ai, -h))) / (h * h)
    } else {
        let pp = f(&shifted(&shifted(z, i, ai, h), j, aj, h));
        let pm = f(&shifted(&shifted(z, i, ai, h), j, aj, -h));
        let mp = f(&shifted(&shifted(z, i, ai, -h), j, aj, h));
        let mm = f(&shifted(&shifted(z, i, ai, -h), j, aj, -h));
        (pp - pm - mp + mm) / (4.0 * h * h)
    }
}

/// Mixed complex Hessian d^2 f / dZ_i dZbar_j of a real-valued chart
/// function, returned as an n x n complex matrix (Hermitian up to
/// truncation error).
pub fn mixed_hessian<F>(f: &F, z: &[Complex64]) -> Array2<Complex64>
where
    F: Fn(&[Complex64]) -> f64,
{
    let n = z.len();
    let mut out = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            let xx = second_partial(f, z, i, Axis::Re, j, Axis::Re);
            let yy = second_partial(f, z, i, Axis::Im, j, Axis::Im);
            let xy = second_partial(f, z, i, Axis::Re, j, Axis::Im);
            let yx = second_partial(f, z, i, Axis::Im, j, Axis::Re);
            out[[i, j]] = Complex64::new(xx + yy, xy - yx) * 0.25;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wirtinger_of_holomorphic_square() {
        // f(z) = z^2: df/dz = 2z, df/dzbar = 0.
        let f = |z: &[Complex64]| z[0] * z[0];
        let z = [Complex64::new(0.7, -0.3)];
        let holo = wirtinger_holo(&f, &z, 0);
        let anti = wirtinger_anti(&f, &z, 0);
        assert!((holo - 2.0 * z[0]).norm() < 1e-9);
        assert!(anti.norm() < 1e-9);
    }

    #[test]
    fn hessian_of_modulus_squared() {
        // f = |z1|^2 + 2|z2|^2: Hessian diag(1, 2).
        let f = |z: &[Complex64]| z[0].norm_sqr() + 2.0 * z[1].norm_sqr();
        let z = [Complex64::new(0.2,0.1), Complex64::new(-0.4, 0.9)];
        let h = mixed_hessian(&f, &z);
        assert!((h[[0, 0]] - Complex64::new(1.0, 0.0)).norm() < 1e-7);
        assert!((h[[1, 1]] - Complex64::new(2.0, 0.0)).norm() < 1e-7);
        assert!(h[[0, 1]].norm() < 1e-7);
    }
}
