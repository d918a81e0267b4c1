//! Gaussian quadrature rules.
//!
//! Nodes are found by Newton iteration on the three-term recurrences, from
//! the classical asymptotic starting guesses. An n-point Gauss rule is exact
//! for polynomials of degree `2n - 1` against its weight.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{ImaginaryUnit, QuaternionFloat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    /// `∫_R g(x) e^{-x²} dx`.
    GaussHermiteLine,
    /// `∫_C g(z) dμ(z)` with `dμ = e^{-|z|²} dA / π`.
    GaussianPlanePolar,
    /// `∫_0^1 g(t) dt`.
    GaussLegendreInterval,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

const NEWTON_EPS: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

impl QuadratureRule {
    /// Gauss-Hermite nodes and weights for the weight `e^{-x²}`.
    pub fn gauss_hermite(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        let mut z = 0.0f64;
        for i in 0..m {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            for _ in 0..NEWTON_MAX_ITER {
                let (p1, p2) = hermite_pair(n, z);
                let pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= NEWTON_EPS * z.abs().max(1.0) {
                    break;
                }
            }
            let pp = (2.0 * nf).sqrt() * hermite_pair(n, z).1;
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        // Ascending order.
        nodes.reverse();
        weights.reverse();
        QuadratureRule {
            kind: RuleKind::GaussHermiteLine,
            nodes,
            weights,
        }
    }

    /// Gauss-Legendre on `[a, b]`.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let xm = 0.5 * (b + a);
        let xl = 0.5 * (b - a);
        let nf = n as f64;
        for i in 0..m {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut pp = 0.0;
            for _ in 0..NEWTON_MAX_ITER {
                let mut p1 = 1.0;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
                }
                pp = nf * (z * p1 - p2) / (z * z - 1.0);
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= NEWTON_EPS {
                    break;
                }
            }
            nodes[i] = xm - xl * z;
            nodes[n - 1 - i] = xm + xl * z;
            weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        QuadratureRule {
            kind: RuleKind::GaussLegendreInterval,
            nodes,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly against the weight.
    pub fn exactness_degree(&self) -> usize {
        (2 * self.nodes.len()).saturating_sub(1)
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss-Laguerre nodes and weights for `∫_0^∞ g(s) e^{-s} ds`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2])
            }
        };
        for _ in 0..NEWTON_MAX_ITER {
            let (p1, p2) = laguerre_pair(n, z);
            // L_n'(z) = n (L_n - L_{n-1}) / z
            let pp = nf * (p1 - p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= NEWTON_EPS * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        // Christoffel form w = 1 / Σ_{k<n} L_k(z)²; the textbook
        // z / (n L_{n-1}(z))² amplifies node rounding near the origin.
        weights[i] = 1.0 / laguerre_christoffel(n, z);
    }
    (nodes, weights)
}

/// `(L_n(z), L_{n-1}(z))`.
fn laguerre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
    }
    (p1, p2)
}

fn laguerre_christoffel(n: usize, z: f64) -> f64 {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    let mut sum = 0.0;
    for j in 0..n {
        sum += p1 * p1;
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
    }
    sum
}

/// `(p_n(z), p_{n-1}(z))` for the orthonormal Hermite polynomials.
fn hermite_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
    }
    (p1, p2)
}

/// Product rule for `dμ(z) = e^{-|z|²} dA(z) / π` in polar form:
/// Gauss-Laguerre in `s = r²` times the trapezoid rule in the angle.
///
/// With `n` radial and `m` angular nodes, `∫ z̄^k z^j dμ` is exact whenever
/// `k + j <= min(4n - 2, m - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneRule {
    radial: usize,
    angular: usize,
    /// `(x, y, w)` with node `x + i y`.
    points: Vec<(f64, f64, f64)>,
}

impl PlaneRule {
    pub fn new(radial: usize, angular: usize) -> Self {
        let (s, w) = gauss_laguerre(radial);
        let mut points = Vec::with_capacity(radial * angular);
        for (&sa, &wa) in s.iter().zip(&w) {
            let r = sa.sqrt();
            for b in 0..angular {
                let theta = 2.0 * PI * b as f64 / angular as f64;
                points.push((r * theta.cos(), r * theta.sin(), wa / angular as f64));
            }
        }
        PlaneRule {
            radial,
            angular,
            points,
        }
    }

    pub fn kind(&self) -> RuleKind {
        RuleKind::GaussianPlanePolar
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.radial, self.angular)
    }

    pub fn exactness_degree(&self) -> usize {
        (4 * self.radial - 2).min(self.angular - 1)
    }

    pub fn check_exact(&self, degree: usize) -> Result<()> {
        if degree > self.exactness_degree() {
            return Err(Error::ExactnessExceeded {
                requested: degree,
                exact: self.exactness_degree(),
            });
        }
        Ok(())
    }

    pub fn points(&self) -> &[(f64, f64, f64)] {
        &self.points
    }

    /// `Σ w g(z)` over the nodes `z = x + ω y` of the slice `C_ω`.
    pub fn integrate_slice<F>(&self, unit: &ImaginaryUnit, g: F) -> QuaternionFloat
    where
        F: Fn(&QuaternionFloat) -> QuaternionFloat,
    {
        let mut acc = QuaternionFloat::zero();
        for &(x, y, w) in &self.points {
            acc += g(&unit.slice_point(x, y)).scale(&w);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::factorial_f64;

    #[test]
    fn hermite_rule_moments() {
        let rule = QuadratureRule::gauss_hermite(80);
        assert_eq!(rule.len(), 80);
        let total: f64 = rule.weights.iter().sum();
        assert!((total - PI.sqrt()).abs() < 1e-13);
        // ∫ x^{2m} e^{-x²} = Γ(m + 1/2)
        let mut gamma_half = PI.sqrt();
        for m in 0..20 {
            let val = rule.integrate(|x| x.powi(2 * m));
            assert!((val - gamma_half).abs() < 1e-12 * gamma_half, "m = {m}");
            assert!(rule.integrate(|x| x.powi(2 * m + 1)).abs() < 1e-10 * gamma_half.max(1.0));
            gamma_half *= m as f64 + 0.5;
        }
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn legendre_rule() {
        let rule = QuadratureRule::gauss_legendre(64, 0.0, 1.0);
        assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        for k in 0..100 {
            let v = rule.integrate(|t| t.powi(k));
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "k = {k}");
        }
        assert_eq!(rule.exactness_degree(), 127);
    }

    #[test]
    fn laguerre_rule() {
        for n in [8, 32, 64] {
            let (s, w) = gauss_laguerre(n);
            let m = w.iter().sum::<f64>() - 1.0;
            assert!(m.abs() < 1e-13, "n = {n}, mass defect {m:e}");
            for k in 0..(2 * n).min(30) {
                let v: f64 = s.iter().zip(&w).map(|(x, wt)| wt * x.powi(k as i32)).sum();
                let exact = factorial_f64(k);
                assert!(
                    (v - exact).abs() < 1e-12 * exact,
                    "n = {n}, k = {k}, rel = {:e}",
                    (v - exact).abs() / exact
                );
            }
        }
    }

    #[test]
    fn plane_rule_mass() {
        let rule = PlaneRule::new(64, 128);
        assert_eq!(rule.exactness_degree(), 127);
        let total: f64 = rule.points().iter().map(|p| p.2).sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert!(rule.check_exact(200).is_err());
    }
}
