//! Integration against the Fubini-Study weight on the affine chart.
//!
//! Two tiers: a closed-form monomial table valid for every n, used by all
//! identity-level checks, and a numeric grid rule for n = 1 used by the
//! star product. The level-L reference integral is
//!
//!   I_L[f] = integral over C^n of f(Z) (1 + |Z|^2)^(-(L+n+1)) dLebesgue,
//!
//! whose monomial values are I_L[Z^a Zbar^b] =
//! delta_ab pi^n a! (L-|a|)! / (L+n)!. Level 0 is the invariant volume:
//! I_0[1] = pi^n / n!.
//!
//! The grid rule works in polar coordinates Z = r e^{i phi} with the
//! compactifying substitution r = tan(theta/2), parametrized through
//! u = sin^2(theta/2) = r^2/(1+r^2), in which every radial monomial of the
//! exactness class is a polynomial of degree at most L; Gauss-Legendre in u
//! is therefore exact to roundoff, and the uniform trapezoid in phi is
//! exact on all surviving angular harmonics. Weights carry the full
//! level-L density, so `integrate` sums plain integrand values. Nodes are
//! ordered radially first, then by angle, and summation is sequential in
//! that order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::ChartPoint;
use crate::model::{factorial, ModelConfig};

/// Node/weight set with a declared joint polynomial exactness degree in
/// (Z, Zbar) against its level weight.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<ChartPoint>,
    weights: Vec<f64>,
    exact_degree: usize,
    level: usize,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[ChartPoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // Newton starting points produce descending nodes; flip to ascending.
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Closed-form monomial integral for the config's level; zero unless the
/// multi-indices match.
pub fn monomial_integral(cfg: &ModelConfig, alpha: &[usize], beta: &[usize]) -> Result<f64> {
    if alpha.len() != cfg.n() || beta.len() != cfg.n() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n(),
            got: alpha.len().max(beta.len()),
        });
    }
    monomial_integral_level(cfg.n(), cfg.level(), alpha, beta)
}

/// Same as [`monomial_integral`] with an explicit level (level 0 is the
/// plain Fubini-Study volume).
pub fn monomial_integral_level(
    n: usize,
    level: usize,
    alpha: &[usize],
    beta: &[usize],
) -> Result<f64> {
    let da: usize = alpha.iter().sum();
    let db: usize = beta.iter().sum();
    if da > level || db > level {
        return Err(Error::DegreeOverflow {
            degree: da.max(db),
            level,
        });
    }
    if alpha != beta {
        return Ok(0.0);
    }
    let mut value = std::f64::consts::PI.powi(n as i32) * factorial(level - da)
        / factorial(level + n);
    for &a in alpha {
        value *= factorial(a);
    }
    Ok(value)
}

/// Grid rule for the config's n and level with the default sizes
/// radial = 2N + 4, angular = 4N + 4.
pub fn default_grid_rule(cfg: &ModelConfig) -> Result<QuadratureRule> {
    build_grid_rule(cfg, 2 * cfg.level() + 4, 4 * cfg.level() + 4)
}

/// Grid rule for the config's level; exact on all monomials with
/// |alpha|, |beta| <= N, verified against the monomial table at build time.
pub fn build_grid_rule(
    cfg: &ModelConfig,
    radial_points: usize,
    angular_points: usize,
) -> Result<QuadratureRule> {
    grid_rule(cfg.n(), cfg.level(), radial_points, angular_points)
}

/// Grid rule against the level-`level` weight (level 0 allowed).
pub fn grid_rule(
    n: usize,
    level: usize,
    radial_points: usize,
    angular_points: usize,
) -> Result<QuadratureRule> {
    if n != 1 {
        return Err(Error::UnsupportedDimension { n });
    }
    if radial_points < 1 {
        return Err(Error::InvalidConfig("radial_points must be >= 1".into()));
    }
    let needed = 2 * level + 2;
    if angular_points < needed {
        return Err(Error::TooFewAngularNodes {
            needed,
            got: angular_points,
        });
    }

    let (gl_nodes, gl_weights) = gauss_legendre(radial_points);
    let angular_weight = std::f64::consts::TAU / angular_points as f64;

    let mut nodes = Vec::with_capacity(radial_points * angular_points);
    let mut weights = Vec::with_capacity(radial_points * angular_points);
    for (x, glw) in gl_nodes.iter().zip(&gl_weights) {
        let u = 0.5 * (x + 1.0); // map [-1,1] to (0,1)
        let r = (u / (1.0 - u)).sqrt();
        let radial_weight = glw * 0.25 * (1.0 - u).powi(level as i32);
        for k in 0..angular_points {
            let phi = std::f64::consts::TAU * k as f64 / angular_points as f64;
            nodes.push(ChartPoint::one(Complex64::from_polar(r, phi)));
            weights.push(radial_weight * angular_weight);
        }
    }

    let rule = QuadratureRule {
        nodes,
        weights,
        exact_degree: 2 * level,
        level,
    };
    verify_exactness(&rule)?;
    Ok(rule)
}

/// Check every monomial pair with both exponents at most the level against
/// the closed-form table.
fn verify_exactness(rule: &QuadratureRule) -> Result<()> {
    let level = rule.level;
    let mut worst = 0.0f64;
    for a in 0..=level {
        for b in 0..=level {
            let mut sum = Complex64::new(0.0, 0.0);
            for (node, w) in rule.nodes.iter().zip(&rule.weights) {
                let z = node.coords()[0];
                sum += z.powu(a as u32) * z.conj().powu(b as u32) * *w;
            }
            let expect = monomial_integral_level(1, level, &[a], &[b])?;
            worst = worst.max((sum - Complex64::new(expect, 0.0)).norm());
        }
    }
    if worst > 1e-12 {
        return Err(Error::InexactRule { defect: worst });
    }
    Ok(())
}

/// Weighted sum of `f` over the rule's nodes, reduced sequentially in node
/// order. The rule's weights already carry the reference density.
pub fn integrate<F>(rule: &QuadratureRule, f: F) -> Result<Complex64>
where
    F: Fn(&ChartPoint) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (index, (node, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let value = f(node);
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFiniteIntegrand { index, value });
        }
        acc += value * *w;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// 1-D oracle for n = 1: after the angular integral, the radial part in
    /// u = r^2/(1+r^2) is pi * integral of u^k (1-u)^(N-k) over (0,1);
    /// evaluate it with composite Simpson.
    fn radial_oracle(level: usize, k: usize) -> f64 {
        let steps = 20_000usize;
        let h = 1.0 / steps as f64;
        let f = |u: f64| u.powi(k as i32) * (1.0 - u).powi((level - k) as i32);
        let mut sum = f(0.0) + f(1.0);
        for i in 1..steps {
            let u = i as f64 * h;
            sum += f(u) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        PI * sum * h / 3.0
    }

    /// Nested Gauss-Legendre oracle for n = 2 diagonal monomials, in the
    /// simplex coordinates u = p/(1-p-q), v = q/(1-p-q) where the radial
    /// integrand is the polynomial p^a q^b (1-p-q)^(N-a-b).
    fn planar_oracle(level: usize, a1: usize, a2: usize) -> f64 {
        let (nodes, weights) = gauss_legendre(24);
        let pow = (level - a1 - a2) as i32;
        let mut outer = 0.0;
        for (x, wx) in nodes.iter().zip(&weights) {
            let p = 0.5 * (x + 1.0);
            let span = 1.0 - p;
            let mut inner = 0.0;
            for (y, wy) in nodes.iter().zip(&weights) {
                let q = span * 0.5 * (y + 1.0);
                inner += wy * (span * 0.5) * q.powi(a2 as i32) * (1.0 - p - q).powi(pow);
            }
            outer += wx * 0.5 * p.powi(a1 as i32) * inner;
        }
        PI * PI * outer
    }

    #[test]
    fn monomial_examples() {
        // Constant against the level-1 weight on CP^1: radial oracle
        // confirms pi/2.
        let cfg = ModelConfig::new(1, 1).unwrap();
        let value = monomial_integral(&cfg, &[0], &[0]).unwrap();
        assert!((value - PI / 2.0).abs() < 1e-14);
        assert!((value - radial_oracle(1, 0)).abs() < 1e-10);

        // Angular orthogonality.
        assert_eq!(monomial_integral(&cfg, &[1], &[0]).unwrap(), 0.0);

        // |Z|^2 against the level-2 weight: pi * 1! * 1! / 3! = pi/6.
        let cfg = ModelConfig::new(1, 2).unwrap();
        let value = monomial_integral(&cfg, &[1], &[1]).unwrap();
        assert!((value - PI / 6.0).abs() < 1e-14);
        assert!((value - radial_oracle(2, 1)).abs() < 1e-10);
    }

    #[test]
    fn monomial_table_matches_radial_oracle() {
        for level in [1usize, 3, 6] {
            for k in 0..=level {
                let cfg = ModelConfig::new(1, level).unwrap();
                let table = monomial_integral(&cfg, &[k], &[k]).unwrap();
                let oracle = radial_oracle(level, k);
                assert!(
                    (table - oracle).abs() < 1e-9 * table.max(1.0),
                    "level {level}, k {k}: {table} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn monomial_table_matches_planar_oracle() {
        for (level, a1, a2) in [(2usize, 0usize, 0usize), (2, 1, 1), (3, 2, 1)] {
            let cfg = ModelConfig::new(2, level).unwrap();
            let table = monomial_integral(&cfg, &[a1, a2], &[a1, a2]).unwrap();
            let oracle = planar_oracle(level, a1, a2);
            assert!(
                (table - oracle).abs() < 1e-12 * table.max(1.0),
                "level {level}, ({a1},{a2}): {table} vs {oracle}"
            );
        }
    }

    #[test]
    fn monomial_degree_overflow() {
        let cfg = ModelConfig::new(1, 2).unwrap();
        assert!(matches!(
            monomial_integral(&cfg, &[3], &[3]),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn grid_rule_matches_monomial_table() {
        for level in [1usize, 2, 5, 8] {
            let cfg = ModelConfig::new(1, level).unwrap();
            let rule = default_grid_rule(&cfg).unwrap();
            assert_eq!(rule.exact_degree(), 2 * level);
            for a in 0..=level {
                for b in 0..=level {
                    let sum = integrate(&rule, |z| {
                        let x = z.coords()[0];
                        x.powu(a as u32) * x.conj().powu(b as u32)
                    })
                    .unwrap();
                    let expect = monomial_integral(&cfg, &[a], &[b]).unwrap();
                    assert!(
                        (sum - c(expect, 0.0)).norm() < 1e-12,
                        "level {level} monomial ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn level_zero_volume_is_pi() {
        let rule = grid_rule(1, 0, 6, 4).unwrap();
        let volume = integrate(&rule, |_| c(1.0, 0.0)).unwrap();
        assert!((volume - c(PI, 0.0)).norm() < 1e-10);
        let weight_sum: f64 = rule.weights().iter().sum();
        assert!((weight_sum - PI).abs() < 1e-10);
        assert!(rule.weights().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn angular_symmetry_kills_unbalanced_monomials() {
        let rule = grid_rule(1, 3, 10, 14).unwrap();
        let sum = integrate(&rule, |z| z.coords()[0]).unwrap();
        assert!(sum.norm() < 1e-14);
    }

    #[test]
    fn example_level2_grid() {
        let cfg = ModelConfig::new(1, 2).unwrap();
        let rule = build_grid_rule(&cfg, 8, 8).unwrap();
        let sum = integrate(&rule, |z| c(z.norm_sqr(), 0.0)).unwrap();
        assert!((sum - c(PI / 6.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn resolution_integrand_entry() {
        // Entry (0,0) of the resolution-of-identity integrand is the
        // constant 1; its integral is 1/c_tilde = pi N!/(N+1)!.
        let cfg = ModelConfig::new(1, 2).unwrap();
        let rule = default_grid_rule(&cfg).unwrap();
        let sum = integrate(&rule, |_| c(1.0, 0.0)).unwrap();
        let c_tilde_inv = PI * factorial(2) / factorial(3);
        assert!((sum - c(c_tilde_inv, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn refinement_stability() {
        let cfg = ModelConfig::new(1, 4).unwrap();
        let coarse = build_grid_rule(&cfg, 12, 20).unwrap();
        let fine = build_grid_rule(&cfg, 24, 20).unwrap();
        for (a, b) in [(0usize, 0usize), (2, 2), (4, 4), (3, 1)] {
            let f = |z: &ChartPoint| {
                let x = z.coords()[0];
                x.powu(a as u32) * x.conj().powu(b as u32)
            };
            let one = integrate(&coarse, f).unwrap();
            let two = integrate(&fine, f).unwrap();
            assert!((one - two).norm() < 1e-13);
        }
    }

    #[test]
    fn zero_integrand() {
        let rule = grid_rule(1, 2, 8, 8).unwrap();
        let sum = integrate(&rule, |_| c(0.0, 0.0)).unwrap();
        assert_eq!(sum, c(0.0, 0.0));
    }

    #[test]
    fn nan_is_reported_with_node() {
        let rule = grid_rule(1, 1, 4, 4).unwrap();
        let bad = integrate(&rule, |z| {
            if z.coords()[0].re > 0.0 {
                c(f64::NAN, 0.0)
            } else {
                c(1.0, 0.0)
            }
        });
        assert!(matches!(bad, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn rejects_bad_grid_configs() {
        assert!(matches!(
            grid_rule(2, 2, 8, 8),
            Err(Error::UnsupportedDimension { n: 2 })
        ));
        assert!(matches!(
            grid_rule(1, 3, 8, 4),
            Err(Error::TooFewAngularNodes { needed: 8, got: 4 })
        ));
    }

    #[test]
    fn gauss_legendre_five_point() {
        let (nodes, weights) = gauss_legendre(5);
        let expect_nodes = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ];
        let expect_weights = [
            0.236_926_885_056_189_08,
            0.478_628_670_499_366_47,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_47,
            0.236_926_885_056_189_08,
        ];
        for (got, want) in nodes.iter().zip(expect_nodes) {
            assert!((got - want).abs() < 1e-14);
        }
        for (got, want) in weights.iter().zip(expect_weights) {
            assert!((got - want).abs() < 1e-14);
        }
    }
}
