//! Symbol calculus on the coherent family: the holomorphic-sector inner
//! product, resolution of identity, covariant symbols, the reproducing
//! (Bergman) kernel, the two-point kernel, the star product and the
//! epsilon function, plus the semiclassical scan in the level N.
//!
//! Every operation that divides by a coherent overlap raises
//! [`Error::CutLocusDomain`] exactly when [`crate::geometry::in_cut_locus`]
//! holds at [`DOMAIN_TOL`], so the admissible domain of symbols is the
//! complement of the cut locus of the anchoring point.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{self, ChartPoint};
use crate::model::{factorial, ModelConfig};
use crate::quadrature::{self, QuadratureRule};
use crate::repspace::{self, CoherentVector, LinOperator};

/// Tolerance of the cut-locus domain checks (an angle, measured from the
/// maximal geodesic distance pi/2).
pub const DOMAIN_TOL: f64 = 1e-9;

/// Normalization (N+n)!/(pi^n N!) that makes the coherent family resolve
/// the identity; also the diagonal value of the two-point kernel.
pub fn resolution_constant(cfg: &ModelConfig) -> f64 {
    factorial(cfg.level() + cfg.n())
        / (std::f64::consts::PI.powi(cfg.n() as i32) * factorial(cfg.level()))
}

fn cut_locus_error(cfg: &ModelConfig, z: &ChartPoint, w: &ChartPoint) -> Error {
    let num = repspace::overlap(cfg, z, w).norm();
    let den = (repspace::coherent_norm_sqr(cfg, z) * repspace::coherent_norm_sqr(cfg, w)).sqrt();
    Error::CutLocusDomain {
        z: format!("{:?}", z.coords()),
        w: format!("{:?}", w.coords()),
        overlap: num / den,
    }
}

/// A covariant symbol, represented by its operator; evaluation off and on
/// the diagonal are the operations below.
#[derive(Debug, Clone)]
pub struct SymbolFunction {
    operator: LinOperator,
    config: ModelConfig,
}

impl SymbolFunction {
    pub fn new(config: ModelConfig, operator: LinOperator) -> Result<Self> {
        config.check_dim(operator.dim())?;
        Ok(Self { operator, config })
    }

    pub fn operator(&self) -> &LinOperator {
        &self.operator
    }

    pub fn eval(&self, z: &ChartPoint, v: &ChartPoint) -> Result<Complex64> {
        covariant_symbol(&self.config, &self.operator, z, v)
    }

    pub fn eval_diagonal(&self, z: &ChartPoint) -> Complex64 {
        diagonal_symbol(&self.config, &self.operator, z)
    }
}

/// Inner product on holomorphic coefficient functions Y_u(z) = (u, e_z):
/// c(N) * integral of Y_u conj(Y_v) against the level-N weight, evaluated
/// with the supplied rule. By supercompleteness this equals the plain
/// Hilbert inner product (u, v).
pub fn fh_inner(
    cfg: &ModelConfig,
    u: &CoherentVector,
    v: &CoherentVector,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    cfg.check_dim(u.dim())?;
    cfg.check_dim(v.dim())?;
    if rule.level() != cfg.level() {
        return Err(Error::InvalidConfig(format!(
            "rule is built for level {}, config has level {}",
            rule.level(),
            cfg.level()
        )));
    }
    let integral = quadrature::integrate(rule, |z| {
        let e_z = repspace::coherent_vector(cfg, z);
        u.inner(&e_z) * v.inner(&e_z).conj()
    })?;
    Ok(integral * resolution_constant(cfg))
}

/// Exact-route version of [`fh_inner`] through the monomial table; valid
/// for every n and used where no grid rule exists (n >= 2).
pub fn fh_inner_exact(cfg: &ModelConfig, u: &CoherentVector, v: &CoherentVector) -> Result<Complex64> {
    cfg.check_dim(u.dim())?;
    cfg.check_dim(v.dim())?;
    let c = resolution_constant(cfg);
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, alpha) in cfg.basis().iter().enumerate() {
        let weight = cfg.coherent_coeff_sqrt(k).powi(2)
            * quadrature::monomial_integral(cfg, alpha, alpha)?;
        acc += u.coeffs()[k].conj() * v.coeffs()[k] * (c * weight);
    }
    Ok(acc)
}

/// Frobenius distance of c(N) * integral of e_z e_z^dagger (level-N weight)
/// from the identity, entirely through the monomial table.
pub fn resolution_defect(cfg: &ModelConfig) -> f64 {
    let c = resolution_constant(cfg);
    let dim = cfg.dimension();
    let mut acc = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let entry = c
                * cfg.coherent_coeff_sqrt(i)
                * cfg.coherent_coeff_sqrt(j)
                * quadrature::monomial_integral(cfg, &cfg.basis()[i], &cfg.basis()[j])
                    .expect("basis degrees stay within the level");
            let expect = if i == j { 1.0 } else { 0.0 };
            acc += (entry - expect) * (entry - expect);
        }
    }
    acc.sqrt()
}

/// Covariant symbol of an operator, anchored at Z and evaluated at V:
/// (e_Z, A e_V) / (e_Z, e_V). Defined only while V stays off the cut locus
/// of Z, where the overlap in the denominator vanishes.
pub fn covariant_symbol(
    cfg: &ModelConfig,
    a: &LinOperator,
    z: &ChartPoint,
    v: &ChartPoint,
) -> Result<Complex64> {
    cfg.check_dim(a.dim())?;
    if geometry::in_cut_locus(z, v, DOMAIN_TOL) {
        return Err(cut_locus_error(cfg, z, v));
    }
    let e_z = repspace::coherent_vector(cfg, z);
    let e_v = repspace::coherent_vector(cfg, v);
    let numerator = e_z.inner(&a.apply(&e_v)?);
    Ok(numerator / e_z.inner(&e_v))
}

/// Covariant symbol on the diagonal, a total function of the chart.
pub fn diagonal_symbol(cfg: &ModelConfig, a: &LinOperator, z: &ChartPoint) -> Complex64 {
    let e_z = repspace::coherent_vector(cfg, z);
    let numerator = e_z.inner(&a.apply(&e_z).expect("operator dimension checked by caller"));
    numerator / e_z.norm_sqr()
}

/// Reproducing kernel of the holomorphic sector, L(Z, V) = (e_V, e_Z) =
/// (1 + <V, Z>)^N; holomorphic in Z, antiholomorphic in V.
pub fn bergman_kernel(cfg: &ModelConfig, z: &ChartPoint, v: &ChartPoint) -> Complex64 {
    repspace::overlap(cfg, v, z)
}

/// Two-point kernel G(Z, V) = c(N) |(e_Z, e_V)|^2 / ((e_Z,e_Z)(e_V,e_V)),
/// real, between 0 and c(N), and exactly c(N) on the diagonal; its zero set
/// is the cut locus of Z.
pub fn kernel_g(cfg: &ModelConfig, z: &ChartPoint, v: &ChartPoint) -> f64 {
    let cross = repspace::overlap(cfg, z, v).norm_sqr();
    let diag = repspace::overlap(cfg, z, z).re * repspace::overlap(cfg, v, v).re;
    resolution_constant(cfg) * (cross / diag).min(1.0)
}

/// One star-product evaluation with its independent operator-product
/// oracle.
#[derive(Debug, Clone)]
pub struct StarReport {
    pub point: ChartPoint,
    pub quadrature_value: Complex64,
    pub oracle_value: Complex64,
    pub defect: f64,
}

/// Berezin star product of two covariant symbols at Z, by quadrature over
/// the chart. The integrand is assembled in the fused form
/// c(N) (e_Z, A1 e_v)(e_v, A2 e_Z) / ((e_Z,e_Z)(e_v,e_v)), in which the
/// poles of the off-diagonal symbols cancel against the double zeros of
/// the kernel, so nodes near the cut locus of Z stay finite. The oracle is
/// the symbol of the operator product, which the star product must
/// reproduce exactly.
pub fn star_product(
    cfg: &ModelConfig,
    a1: &LinOperator,
    a2: &LinOperator,
    z: &ChartPoint,
    rule: &QuadratureRule,
) -> Result<StarReport> {
    if cfg.n() != 1 {
        return Err(Error::UnsupportedDimension { n: cfg.n() });
    }
    cfg.check_dim(a1.dim())?;
    cfg.check_dim(a2.dim())?;
    if rule.level() != cfg.level() {
        return Err(Error::InvalidConfig(format!(
            "rule is built for level {}, config has level {}",
            rule.level(),
            cfg.level()
        )));
    }

    let e_z = repspace::coherent_vector(cfg, z);
    // row_j = (e_Z^dagger A1)_j and w = A2 e_Z, so the integrand at v is
    // (row . e_v) (e_v, w) and costs O(dim) per node.
    let dim = cfg.dimension();
    let row: Vec<Complex64> = (0..dim)
        .map(|j| {
            (0..dim)
                .map(|i| e_z.coeffs()[i].conj() * a1.matrix()[[i, j]])
                .sum()
        })
        .collect();
    let w = a2.apply(&e_z)?;

    let integral = quadrature::integrate(rule, |v| {
        let e_v = repspace::coherent_vector(cfg, v);
        let first: Complex64 = row
            .iter()
            .zip(e_v.coeffs())
            .map(|(r, c)| r * c)
            .sum();
        let second: Complex64 = e_v.inner(&w);
        first * second
    })?;
    let quadrature_value =
        integral * resolution_constant(cfg) / repspace::overlap(cfg, z, z).re;

    let oracle_value = diagonal_symbol(cfg, &a1.compose(a2)?, z);
    let defect = (quadrature_value - oracle_value).norm();
    Ok(StarReport {
        point: z.clone(),
        quadrature_value,
        oracle_value,
        defect,
    })
}

/// epsilon(Z) = |e_Z|^2 (1+|Z|^2)^(-N), evaluated literally in floating
/// point; constancy across the chart is the regularity test of the
/// quantization.
pub fn epsilon_function(cfg: &ModelConfig, z: &ChartPoint) -> f64 {
    let t = 1.0 + z.norm_sqr();
    repspace::coherent_norm_sqr(cfg, z) * t.powi(-(cfg.level() as i32))
}

/// Operator pairs used by the semiclassical scan, normalized so their
/// symbols have level-independent range (spin components divided by N/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorFamily {
    /// (Sx, Sy) / (N/2)
    SpinXY,
    /// (Sz, Sz) / (N/2)
    SpinZZ,
    /// (I, I) — degenerate reference family
    Identity,
}

impl OperatorFamily {
    pub fn build(self, cfg: &ModelConfig) -> Result<(LinOperator, LinOperator)> {
        match self {
            OperatorFamily::Identity => Ok((
                LinOperator::identity(cfg.dimension()),
                LinOperator::identity(cfg.dimension()),
            )),
            OperatorFamily::SpinXY | OperatorFamily::SpinZZ => {
                let (sx, sy, sz) = repspace::spin_operators(cfg)?;
                let scale = Complex64::new(2.0 / cfg.level() as f64, 0.0);
                let norm = |op: LinOperator| {
                    LinOperator::new(op.matrix().mapv(|x| x * scale)).expect("square")
                };
                Ok(match self {
                    OperatorFamily::SpinXY => (norm(sx), norm(sy)),
                    _ => (norm(sz.clone()), norm(sz)),
                })
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorFamily::SpinXY => "spin-xy",
            OperatorFamily::SpinZZ => "spin-zz",
            OperatorFamily::Identity => "identity",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub level: usize,
    /// |(A1 * A2)(Z) - A1(Z) A2(Z)|: the deformation defect, O(1/N).
    pub d1: f64,
    /// |Im[(A1 * A2 - A2 * A1)(Z)] - {a1, a2}(Z)|: the star commutator
    /// against the Poisson bracket of the level-N form.
    pub d2: f64,
}

#[derive(Debug, Clone)]
pub struct CorrespondenceScan {
    pub rows: Vec<ScanRow>,
    /// Least-squares slope of ln d1 against ln N; None when some d1
    /// vanishes (degenerate families).
    pub fitted_slope: Option<f64>,
}

/// Scan the deformation and commutator defects over a range of levels at a
/// fixed chart point (n = 1).
pub fn correspondence_scan(
    levels: &[usize],
    family: OperatorFamily,
    z: &ChartPoint,
) -> Result<CorrespondenceScan> {
    let mut rows = Vec::with_capacity(levels.len());
    for &level in levels {
        let cfg = ModelConfig::new(1, level)?;
        let rule = quadrature::default_grid_rule(&cfg)?;
        let (a1, a2) = family.build(&cfg)?;

        let forward = star_product(&cfg, &a1, &a2, z, &rule)?;
        let backward = star_product(&cfg, &a2, &a1, z, &rule)?;
        let product =
            diagonal_symbol(&cfg, &a1, z) * diagonal_symbol(&cfg, &a2, z);
        let d1 = (forward.quadrature_value - product).norm();

        let commutator_im = (forward.quadrature_value - backward.quadrature_value).im;
        let bracket = geometry::poisson_bracket(&cfg, &a1, &a2, z)?;
        let d2 = (commutator_im - bracket.re).abs();
        rows.push(ScanRow { level, d1, d2 });
    }

    let fitted_slope = fit_slope(&rows);
    Ok(CorrespondenceScan { rows, fitted_slope })
}

fn fit_slope(rows: &[ScanRow]) -> Option<f64> {
    // d1 at roundoff level means the family is degenerate and the fit
    // would only see noise.
    if rows.len() < 2 || rows.iter().any(|r| r.d1 <= 1e-14) {
        return None;
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.level as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.d1.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
    let ybar = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let den: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    Some(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::default_grid_rule;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis_vector(dim: usize, k: usize) -> CoherentVector {
        let mut coeffs = vec![c(0.0, 0.0); dim];
        coeffs[k] = c(1.0, 0.0);
        CoherentVector::from_coeffs(coeffs)
    }

    fn random_point(rng: &mut ChaCha8Rng, n: usize) -> ChartPoint {
        ChartPoint::new(
            (0..n)
                .map(|_| c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)))
                .collect(),
        )
        .unwrap()
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> LinOperator {
        let mut m = Array2::from_elem((dim, dim), c(0.0, 0.0));
        for i in 0..dim {
            m[[i, i]] = c(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..dim {
                let v = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[[i, j]] = v;
                m[[j, i]] = v.conj();
            }
        }
        LinOperator::new(m).unwrap()
    }

    #[test]
    fn resolution_constant_examples() {
        let cfg = ModelConfig::new(1, 1).unwrap();
        assert!((resolution_constant(&cfg) - 2.0 / PI).abs() < 1e-15);
        let cfg = ModelConfig::new(2, 2).unwrap();
        assert!((resolution_constant(&cfg) - 12.0 / (PI * PI)).abs() < 1e-14);
    }

    #[test]
    fn fh_inner_examples() {
        let cfg = ModelConfig::new(1, 2).unwrap();
        let rule = default_grid_rule(&cfg).unwrap();
        let e0 = basis_vector(3, 0);
        let e1 = basis_vector(3, 1);

        let diag = fh_inner(&cfg, &e0, &e0, &rule).unwrap();
        assert!((diag - c(1.0, 0.0)).norm() < 1e-12);

        let off = fh_inner(&cfg, &e0, &e1, &rule).unwrap();
        assert!(off.norm() < 1e-13);

        let u = CoherentVector::from_coeffs(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let v = CoherentVector::from_coeffs(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(u.inner(&v), c(0.0, 0.0));
        assert!(fh_inner(&cfg, &u, &v, &rule).unwrap().norm() < 1e-13);
    }

    #[test]
    fn parseval_sweep_grid_and_exact() {
        let cfg = ModelConfig::new(1, 4).unwrap();
        let rule = default_grid_rule(&cfg).unwrap();
        let dim = cfg.dimension();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let u = basis_vector(dim, i);
                let v = basis_vector(dim, j);
                let grid = fh_inner(&cfg, &u, &v, &rule).unwrap();
                let exact = fh_inner_exact(&cfg, &u, &v).unwrap();
                let expect = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                worst = worst.max((grid - expect).norm());
                worst = worst.max((exact - expect).norm());
            }
        }
        assert!(worst < 1e-10, "Parseval defect {worst}");

        // n = 2 goes through the exact route only.
        let cfg = ModelConfig::new(2, 2).unwrap();
        let dim = cfg.dimension();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let u = basis_vector(dim, i);
                let v = basis_vector(dim, j);
                let exact = fh_inner_exact(&cfg, &u, &v).unwrap();
                let expect = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                worst = worst.max((exact - expect).norm());
            }
        }
        assert!(worst < 1e-12);
    }

    #[test]
    fn fh_inner_checks_dimensions() {
        let cfg = ModelConfig::new(1, 2).unwrap();
        let rule = default_grid_rule(&cfg).unwrap();
        let short = basis_vector(2, 0);
        let ok = basis_vector(3, 0);
        assert!(matches!(
            fh_inner(&cfg, &short, &ok, &rule),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn resolution_defect_is_roundoff() {
        for (n, level) in [(1usize, 1usize), (1, 8), (2, 2)] {
            let cfg = ModelConfig::new(n, level).unwrap();
            let defect = resolution_defect(&cfg);
            assert!(defect < 1e-12, "({n},{level}) defect {defect}");
        }
    }

    #[test]
    fn symbol_of_identity_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let cfg = ModelConfig::new(1, 3).unwrap();
        let ident = LinOperator::identity(cfg.dimension());
        for _ in 0..20 {
            let z = random_point(&mut rng, 1);
            let v = random_point(&mut rng, 1);
            if geometry::in_cut_locus(&z, &v, DOMAIN_TOL) {
                continue;
            }
            let s = covariant_symbol(&cfg, &ident, &z, &v).unwrap();
            assert_eq!(s, c(1.0, 0.0));
        }
    }

    #[test]
    fn spin_z_symbol_closed_form() {
        // 2x2 oracle at N = 1: symbol of Sz on the diagonal is
        // (|Z|^2 - 1)/(2(1+|Z|^2)).
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let cfg = ModelConfig::new(1, 1).unwrap();
        let (_, _, sz) = repspace::spin_operators(&cfg).unwrap();
        for _ in 0..25 {
            let z = random_point(&mut rng, 1);
            let t = z.norm_sqr();
            let expect = (t - 1.0) / (2.0 * (1.0 + t));
            let got = covariant_symbol(&cfg, &sz, &z, &z).unwrap();
            assert!((got - c(expect, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn symbol_raises_cut_locus_error() {
        let cfg = ModelConfig::new(1, 3).unwrap();
        let ident = LinOperator::identity(cfg.dimension());
        let z = ChartPoint::one(c(1.0, 0.0));
        let v = ChartPoint::one(c(-1.0, 0.0));
        assert!(matches!(
            covariant_symbol(&cfg, &ident, &z, &v),
            Err(Error::CutLocusDomain { .. })
        ));
    }

    #[test]
    fn domain_contract_matches_cut_locus_predicate() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let cfg = ModelConfig::new(1, 4).unwrap();
        let op = random_hermitian(&mut rng, cfg.dimension());
        for k in 0..200 {
            let (z, v) = if k % 2 == 0 {
                (random_point(&mut rng, 1), random_point(&mut rng, 1))
            } else {
                let z = loop {
                    let z = random_point(&mut rng, 1);
                    if z.norm_sqr() > 1e-2 {
                        break z;
                    }
                };
                let v = ChartPoint::one(-1.0 / z.coords()[0].conj());
                (z, v)
            };
            let in_cut = geometry::in_cut_locus(&z, &v, DOMAIN_TOL);
            let result = covariant_symbol(&cfg, &op, &z, &v);
            match (in_cut, result) {
                (true, Err(Error::CutLocusDomain { .. })) => {}
                (false, Ok(_)) => {}
                (expected, got) => panic!(
                    "domain contract violated: in_cut_locus = {expected}, result = {:?}",
                    got.map(|_| "Ok")
                ),
            }
        }
    }

    #[test]
    fn symbol_is_sesquiholomorphic() {
        // Cauchy-Riemann via finite differences: antiholomorphic direction
        // of V and holomorphic direction of Z both vanish.
        let cfg = ModelConfig::new(1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let op = random_hermitian(&mut rng, cfg.dimension());
        let z0 = ChartPoint::one(c(0.3, -0.1));
        let v0 = ChartPoint::one(c(-0.2, 0.4));

        let in_v = |coords: &[Complex64]| {
            covariant_symbol(&cfg, &op, &z0, &ChartPoint::new(coords.to_vec()).unwrap()).unwrap()
        };
        let anti_v = crate::numdiff::wirtinger_anti(&in_v, v0.coords(), 0);
        assert!(anti_v.norm() < 1e-6, "symbol not holomorphic in V: {anti_v}");

        let in_z = |coords: &[Complex64]| {
            covariant_symbol(&cfg, &op, &ChartPoint::new(coords.to_vec()).unwrap(), &v0).unwrap()
        };
        let holo_z = crate::numdiff::wirtinger_holo(&in_z, z0.coords(), 0);
        assert!(holo_z.norm() < 1e-6, "symbol not antiholomorphic in Z: {holo_z}");
    }

    #[test]
    fn hermitian_diagonal_symbol_is_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let cfg = ModelConfig::new(1, 5).unwrap();
        for _ in 0..20 {
            let op = random_hermitian(&mut rng, cfg.dimension());
            let z = random_point(&mut rng, 1);
            let s = diagonal_symbol(&cfg, &op, &z);
            assert!(s.im.abs() < 1e-12);
        }
    }

    #[test]
    fn bergman_examples_and_dual_route() {
        let cfg = ModelConfig::new(1, 2).unwrap();
        assert_eq!(
            bergman_kernel(&cfg, &ChartPoint::origin(1), &ChartPoint::origin(1)),
            c(1.0, 0.0)
        );
        let z = ChartPoint::one(c(2.0, 0.0));
        let v = ChartPoint::one(c(1.0, 0.0));
        assert!((bergman_kernel(&cfg, &z, &v) - c(9.0, 0.0)).norm() < 1e-13);

        // Orthonormal-basis sum route.
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..50 {
            let z = random_point(&mut rng, 1);
            let v = random_point(&mut rng, 1);
            let closed = bergman_kernel(&cfg, &z, &v);
            let summed: Complex64 = (0..cfg.dimension())
                .map(|k| {
                    let cz = repspace::coherent_vector(&cfg, &z).coeffs()[k];
                    let cv = repspace::coherent_vector(&cfg, &v).coeffs()[k];
                    cz * cv.conj()
                })
                .sum();
            let scale = closed.norm().max(1.0);
            assert!((closed - summed).norm() / scale < 1e-12);
        }
    }

    #[test]
    fn bergman_diagonal_value() {
        let cfg = ModelConfig::new(1, 5).unwrap();
        let z = ChartPoint::one(c(0.6, -1.1));
        let diag = bergman_kernel(&cfg, &z, &z);
        assert!(diag.im.abs() < 1e-12);
        assert!((diag.re - (1.0 + z.norm_sqr()).powi(5)).abs() < 1e-9 * diag.re);
    }

    #[test]
    fn kernel_g_examples() {
        let cfg = ModelConfig::new(1, 2).unwrap();
        let cst = resolution_constant(&cfg);
        let z = ChartPoint::one(c(0.4, 0.9));
        assert_eq!(kernel_g(&cfg, &z, &z), cst);

        let cfg3 = ModelConfig::new(1, 3).unwrap();
        let one = ChartPoint::one(c(1.0, 0.0));
        let minus = ChartPoint::one(c(-1.0, 0.0));
        assert_eq!(kernel_g(&cfg3, &one, &minus), 0.0);

        let g = kernel_g(&cfg, &ChartPoint::origin(1), &one);
        assert!((g - cst / 4.0).abs() < 1e-14);
    }

    #[test]
    fn kernel_g_stays_in_range_and_vanishes_on_cut_locus() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let cfg = ModelConfig::new(1, 4).unwrap();
        let cst = resolution_constant(&cfg);
        for _ in 0..100 {
            let z = random_point(&mut rng, 1);
            let v = random_point(&mut rng, 1);
            let g = kernel_g(&cfg, &z, &v);
            assert!((0.0..=cst).contains(&g));
        }
        let w = ChartPoint::one(c(0.8, -0.5));
        let cut = ChartPoint::one(-1.0 / w.coords()[0].conj());
        assert!(kernel_g(&cfg, &w, &cut) < 1e-28);
    }

    #[test]
    fn star_identity_examples() {
        let cfg = ModelConfig::new(1, 2).unwrap();
        let rule = default_grid_rule(&cfg).unwrap();
        let ident = LinOperator::identity(cfg.dimension());
        let z = ChartPoint::one(c(0.7, 0.1));
        let report = star_product(&cfg, &ident, &ident, &z, &rule).unwrap();
        assert_eq!(report.oracle_value, c(1.0, 0.0));
        assert!((report.quadrature_value - c(1.0, 0.0)).norm() < 1e-12);
        assert!(report.defect < 1e-12);
    }

    #[test]
    fn star_spin_oracle() {
        // Sz * Sz at the origin for N = 1: Sz^2 = I/4, so the symbol is 1/4.
        let cfg = ModelConfig::new(1, 1).unwrap();
        let rule = default_grid_rule(&cfg).unwrap();
        let (_, _, sz) = repspace::spin_operators(&cfg).unwrap();
        let report =
            star_product(&cfg, &sz, &sz, &ChartPoint::origin(1), &rule).unwrap();
        assert!((report.oracle_value - c(0.25, 0.0)).norm() < 1e-15);
        assert!(report.defect < 1e-12);
    }

    #[test]
    fn star_matches_operator_product_on_random_hermitian_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for level in [1usize, 2, 4, 8] {
            let cfg = ModelConfig::new(1, level).unwrap();
            let rule = default_grid_rule(&cfg).unwrap();
            for _ in 0..20 {
                let a1 = random_hermitian(&mut rng, cfg.dimension());
                let a2 = random_hermitian(&mut rng, cfg.dimension());
                let z = random_point(&mut rng, 1);
                let report = star_product(&cfg, &a1, &a2, &z, &rule).unwrap();
                assert!(
                    report.defect < 1e-8,
                    "level {level}: defect {}",
                    report.defect
                );
            }
        }
    }

    #[test]
    fn star_report_defect_field_is_consistent() {
        let cfg = ModelConfig::new(1, 3).unwrap();
        let rule = default_grid_rule(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let a1 = random_hermitian(&mut rng, cfg.dimension());
        let a2 = random_hermitian(&mut rng, cfg.dimension());
        let report =
            star_product(&cfg, &a1, &a2, &ChartPoint::one(c(0.2, 0.3)), &rule).unwrap();
        assert_eq!(
            report.defect,
            (report.quadrature_value - report.oracle_value).norm()
        );
    }

    #[test]
    fn star_associativity_through_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let cfg = ModelConfig::new(1, 4).unwrap();
        let a = random_hermitian(&mut rng, cfg.dimension());
        let b = random_hermitian(&mut rng, cfg.dimension());
        let d = random_hermitian(&mut rng, cfg.dimension());
        let z = random_point(&mut rng, 1);
        let left = diagonal_symbol(&cfg, &a.compose(&b).unwrap().compose(&d).unwrap(), &z);
        let right = diagonal_symbol(&cfg, &a.compose(&b.compose(&d).unwrap()).unwrap(), &z);
        let scale = left.norm().max(1.0);
        assert!((left - right).norm() / scale < 1e-12);
    }

    #[test]
    fn epsilon_is_constant_one() {
        let cfg = ModelConfig::new(1, 5).unwrap();
        assert_eq!(epsilon_function(&cfg, &ChartPoint::origin(1)), 1.0);
        let z = ChartPoint::one(c(2.0, 3.0));
        assert!((epsilon_function(&cfg, &z) - 1.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(89);
        let values: Vec<f64> = (0..100)
            .map(|_| epsilon_function(&cfg, &random_point(&mut rng, 1)))
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var = values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / values.len() as f64;
        assert!(var.sqrt() / mean < 1e-12);
    }

    #[test]
    fn scan_identity_family_is_flat_zero() {
        let scan = correspondence_scan(
            &[2, 4, 8],
            OperatorFamily::Identity,
            &ChartPoint::one(c(0.5, 0.0)),
        )
        .unwrap();
        for row in &scan.rows {
            assert!(row.d1 < 1e-12);
        }
        assert!(scan.fitted_slope.is_none());
    }

    #[test]
    fn scan_spin_zz_slope_is_minus_one() {
        let scan = correspondence_scan(
            &[2, 4, 8, 16],
            OperatorFamily::SpinZZ,
            &ChartPoint::one(c(0.5, 0.0)),
        )
        .unwrap();
        let slope = scan.fitted_slope.unwrap();
        assert!((slope + 1.0).abs() < 0.15, "slope {slope}");
        // d1 at Z = 0.5 for the normalized Sz pair is 4u(1-u)/N with
        // u = t/(1+t) = 0.2, i.e. 0.64/N.
        for row in &scan.rows {
            assert!((row.d1 - 0.64 / row.level as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn scan_spin_xy_commutator_defect_decreases() {
        let scan = correspondence_scan(
            &[4, 8, 16],
            OperatorFamily::SpinXY,
            &ChartPoint::one(c(0.5, 0.0)),
        )
        .unwrap();
        assert!(scan.rows[0].d2 > scan.rows[1].d2);
        assert!(scan.rows[1].d2 > scan.rows[2].d2);
    }
}
