//! Hermite functions and the Segal-Bargmann type transforms.
//!
//! `η_n` are the L²-orthonormal Hermite functions. `A^F(q, x) = Σ Q_k(q) η_k(x) / √k!`
//! sends `L²(R)` onto the Fock space of Appell series, `A^S(q, x) = Σ q^k η_k(x) / √k!`
//! onto its slice counterpart, and `Υ = B^F ∘ (B^S)^{-1}` connects the two.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::appell::qk_eval_all;
use crate::error::{Error, Result};
use crate::quadrature::{PlaneRule, QuadratureRule};
use crate::quat::{qexp, ImaginaryUnit, QuaternionFloat};
use crate::scalar::factorial_f64;
use crate::spaces::{AppellSeries, Basis, Slice, SliceSeries, WeightKind, WeightSequence};

/// Uniform bound `|η_n(x)| <= π^{-1/4}` (Cramér's inequality).
pub const HERMITE_SUP: f64 = 0.751_125_544_464_942_5;

/// Hermite functions `η_0, ..., η_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HermiteBasis {
    pub max_index: usize,
}

impl HermiteBasis {
    pub fn new(max_index: usize) -> Self {
        HermiteBasis { max_index }
    }

    pub fn eval(&self, n: usize, x: f64) -> Result<f64> {
        if n > self.max_index {
            return Err(Error::Index(format!(
                "Hermite index {n} exceeds {}",
                self.max_index
            )));
        }
        Ok(hermite_functions(x, n)[n])
    }

    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        hermite_functions(x, self.max_index)
    }
}

/// `η_0(x), ..., η_n(x)` by the normalized three-term recurrence.
pub fn hermite_functions(x: f64, n: usize) -> Vec<f64> {
    let g = (-0.5 * x * x).exp();
    hermite_polys(x, n).into_iter().map(|p| p * g).collect()
}

/// Polynomials `p_k` orthonormal for `e^{-x²}`, so `η_k = p_k e^{-x²/2}`.
fn hermite_polys(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(PI.powf(-0.25));
    if n >= 1 {
        out.push(2f64.sqrt() * x * out[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

pub fn hermite_eval(n: usize, x: f64, basis: &HermiteBasis) -> Result<f64> {
    basis.eval(n, x)
}

/// `Σ_{k>K} r^k / √k!` times the uniform Hermite bound.
fn hermite_tail(r: f64, kmax: usize) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let mut term = (1..=kmax).fold(1.0, |t, k| t * r / (k as f64).sqrt());
    let mut tail = 0.0;
    let mut k = kmax;
    loop {
        k += 1;
        term *= r / (k as f64).sqrt();
        tail += term;
        let ratio = r / ((k + 1) as f64).sqrt();
        if ratio < 0.5 && term * ratio / (1.0 - ratio) <= 1e-17 * tail {
            return HERMITE_SUP * (tail + term * ratio / (1.0 - ratio));
        }
        if term == 0.0 {
            return HERMITE_SUP * tail;
        }
    }
}

/// Truncated `A^S(q, x) = Σ_{k<=K} q^k η_k(x) / √k!` with a tail bound.
pub fn kernel_as_series(q: &QuaternionFloat, x: f64, kmax: usize) -> (QuaternionFloat, f64) {
    let eta = hermite_functions(x, kmax);
    let powers = Slice::values(q, kmax);
    let mut acc = QuaternionFloat::zero();
    for k in 0..=kmax {
        acc += powers[k].scale(&(eta[k] / factorial_f64(k).sqrt()));
    }
    (acc, hermite_tail(q.norm(), kmax))
}

/// `exp(-(q² + x²)/2 + √2 q x)` without any normalizing constant.
pub fn kernel_as_closed(q: &QuaternionFloat, x: f64) -> QuaternionFloat {
    let q2 = q * q;
    let mut e = q2.scale(&-0.5) + q.scale(&(2f64.sqrt() * x));
    e.x0 -= 0.5 * x * x;
    qexp(&e)
}

/// Ratio of the series form to the closed form at `(q, x) = (0, 0)`; with
/// orthonormal `η` this measures the normalization constant of the
/// generating function.
pub fn calibrate_as() -> f64 {
    let zero = QuaternionFloat::zero();
    kernel_as_series(&zero, 0.0, 0).0.x0 / kernel_as_closed(&zero, 0.0).x0
}

/// Truncated `A^F(q, x) = Σ_{k<=K} Q_k(q) η_k(x) / √k!` with the tail bound
/// from `|Q_k(q)| <= |q|^k` and `|η_k| <= π^{-1/4}`.
pub fn kernel_af(q: &QuaternionFloat, x: f64, kmax: usize) -> (QuaternionFloat, f64) {
    let eta = hermite_functions(x, kmax);
    let qk = qk_eval_all(q, kmax);
    let mut acc = QuaternionFloat::zero();
    for k in 0..=kmax {
        acc += qk[k].scale(&(eta[k] / factorial_f64(k).sqrt()));
    }
    (acc, hermite_tail(q.norm(), kmax))
}

/// `φ = Σ η_j β_j` stored by its Hermite coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct L2Function {
    pub coeffs: Vec<QuaternionFloat>,
}

impl L2Function {
    pub fn new(coeffs: Vec<QuaternionFloat>) -> Self {
        L2Function { coeffs }
    }

    /// `η_n` itself.
    pub fn hermite(n: usize) -> Self {
        let mut coeffs = vec![QuaternionFloat::zero(); n + 1];
        coeffs[n] = QuaternionFloat::one();
        L2Function { coeffs }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, x: f64) -> QuaternionFloat {
        if self.coeffs.is_empty() {
            return QuaternionFloat::zero();
        }
        let eta = hermite_functions(x, self.coeffs.len() - 1);
        let mut acc = QuaternionFloat::zero();
        for (e, c) in eta.iter().zip(&self.coeffs) {
            acc += c.scale(e);
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformMode {
    /// Closed coefficient formulas.
    Coefficient,
    /// The defining integrals, evaluated by quadrature.
    Quadrature,
}

/// `B^F φ = ∫ A^F(·, x) φ(x) dx`, truncated at `K`.
pub fn bargmann_bf(phi: &L2Function, kmax: usize) -> AppellSeries<f64> {
    let coeffs = (0..=kmax)
        .map(|k| {
            phi.coeffs
                .get(k)
                .map(|b| b.scale(&(1.0 / factorial_f64(k).sqrt())))
                .unwrap_or_else(QuaternionFloat::zero)
        })
        .collect();
    AppellSeries::new(coeffs, WeightSequence::fock())
}

/// `α_k = (1/√k!) ∫ η_k(x) φ(x) dx` by Gauss-Hermite quadrature, where the
/// integrand is rewritten against the weight `e^{-x²}`.
pub fn bargmann_bf_quadrature(
    phi: &L2Function,
    kmax: usize,
    rule: &QuadratureRule,
) -> AppellSeries<f64> {
    let mut coeffs = vec![QuaternionFloat::zero(); kmax + 1];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let eta = hermite_functions(x, kmax);
        let fx = phi.eval(x);
        let scale = w * (x * x).exp();
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c += fx.scale(&(scale * eta[k]));
        }
    }
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c = c.scale(&(1.0 / factorial_f64(k).sqrt()));
    }
    AppellSeries::new(coeffs, WeightSequence::fock())
}

/// Both modes, refused when they differ by more than `tol`.
pub fn bargmann_bf_checked(
    phi: &L2Function,
    kmax: usize,
    rule: &QuadratureRule,
    tol: f64,
) -> Result<AppellSeries<f64>> {
    let exact = bargmann_bf(phi, kmax);
    let quad = bargmann_bf_quadrature(phi, kmax, rule);
    let defect = coeff_distance(exact.coeffs(), quad.coeffs());
    if defect > tol {
        return Err(Error::QuadratureFailure {
            context: "Bargmann transform quadrature vs coefficients".into(),
            defect,
            tolerance: tol,
        });
    }
    Ok(exact)
}

fn require_fock(f: &SliceSeries<f64>) -> Result<()> {
    if *f.weight().kind() != WeightKind::Fock {
        return Err(Error::WeightMismatch(
            f.weight().name().into(),
            "fock".into(),
        ));
    }
    Ok(())
}

/// `(B^S)^{-1}`: `β_k = a_k √k!`.
pub fn bargmann_bs_inverse(f: &SliceSeries<f64>) -> Result<L2Function> {
    require_fock(f)?;
    Ok(L2Function::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(k, a)| a.scale(&factorial_f64(k).sqrt()))
            .collect(),
    ))
}

/// Moments `m_k = ∫_{C_i} z̄^k f(z) dμ_i(z)` for `k <= kmax` on the slice of `unit`.
pub fn slice_moments(
    f: &SliceSeries<f64>,
    unit: &ImaginaryUnit,
    kmax: usize,
    rule: &PlaneRule,
) -> Result<Vec<QuaternionFloat>> {
    rule.check_exact(kmax + f.truncation())?;
    let mut out = vec![QuaternionFloat::zero(); kmax + 1];
    for &(x, y, w) in rule.points() {
        let z = unit.slice_point(x, y);
        let fz = f.eval(&z);
        let zb = Slice::values(&z.conj(), kmax);
        for (m, p) in out.iter_mut().zip(&zb) {
            *m += (p * &fz).scale(&w);
        }
    }
    Ok(out)
}

/// `φ = ∫ A^S(z̄, ·) f(z) dμ_i(z)`, so `β_k = m_k / √k!`.
pub fn bargmann_bs_inverse_quadrature(
    f: &SliceSeries<f64>,
    unit: &ImaginaryUnit,
    rule: &PlaneRule,
) -> Result<L2Function> {
    require_fock(f)?;
    let n = f.truncation();
    let m = slice_moments(f, unit, n, rule)?;
    Ok(L2Function::new(
        m.iter()
            .enumerate()
            .map(|(k, v)| v.scale(&(1.0 / factorial_f64(k).sqrt())))
            .collect(),
    ))
}

pub fn bargmann_bs_inverse_checked(
    f: &SliceSeries<f64>,
    unit: &ImaginaryUnit,
    rule: &PlaneRule,
    tol: f64,
) -> Result<L2Function> {
    let exact = bargmann_bs_inverse(f)?;
    let quad = bargmann_bs_inverse_quadrature(f, unit, rule)?;
    let defect = coeff_distance(&exact.coeffs, &quad.coeffs);
    if defect > tol {
        return Err(Error::QuadratureFailure {
            context: "inverse slice Bargmann quadrature vs coefficients".into(),
            defect,
            tolerance: tol,
        });
    }
    Ok(exact)
}

/// `Υ f = Σ Q_k a_k`.
pub fn upsilon(f: &SliceSeries<f64>) -> AppellSeries<f64> {
    AppellSeries::new(f.coeffs().to_vec(), WeightSequence::fock())
}

/// `Υ f = ∫ L(·, z) f(z) dμ_i(z)` with `L(q, z) = Σ Q_k(q) z̄^k / k!`, read
/// coefficientwise: `α_k = m_k / k!`.
pub fn upsilon_integral(
    f: &SliceSeries<f64>,
    unit: &ImaginaryUnit,
    rule: &PlaneRule,
) -> Result<AppellSeries<f64>> {
    let m = slice_moments(f, unit, f.truncation(), rule)?;
    Ok(AppellSeries::new(
        m.iter()
            .enumerate()
            .map(|(k, v)| v.scale(&(1.0 / factorial_f64(k))))
            .collect(),
        WeightSequence::fock(),
    ))
}

/// `∫ L(q, z) f(z) dμ_i(z)` at one point `q`, with `L` cut at `kmax`.
pub fn upsilon_integral_at(
    f: &SliceSeries<f64>,
    unit: &ImaginaryUnit,
    q: &QuaternionFloat,
    kmax: usize,
    rule: &PlaneRule,
) -> Result<QuaternionFloat> {
    rule.check_exact(kmax + f.truncation())?;
    let qk = qk_eval_all(q, kmax);
    let mut acc = QuaternionFloat::zero();
    for &(x, y, w) in rule.points() {
        let z = unit.slice_point(x, y);
        let fz = f.eval(&z);
        acc += (&kernel_l(&qk, &z) * &fz).scale(&w);
    }
    Ok(acc)
}

/// `L(q, z) = Σ Q_k(q) z̄^k / k!` from precomputed `Q_k(q)`.
fn kernel_l(qk: &[QuaternionFloat], z: &QuaternionFloat) -> QuaternionFloat {
    let zb = Slice::values(&z.conj(), qk.len() - 1);
    let mut acc = QuaternionFloat::zero();
    for (k, (a, b)) in qk.iter().zip(&zb).enumerate() {
        acc += (a * b).scale(&(1.0 / factorial_f64(k)));
    }
    acc
}

/// `B^F ∘ (B^S)^{-1}`, in the given mode for both factors.
pub fn upsilon_composite(
    f: &SliceSeries<f64>,
    unit: &ImaginaryUnit,
    mode: TransformMode,
    hermite: &QuadratureRule,
    plane: &PlaneRule,
) -> Result<AppellSeries<f64>> {
    let n = f.truncation();
    Ok(match mode {
        TransformMode::Coefficient => bargmann_bf(&bargmann_bs_inverse(f)?, n),
        TransformMode::Quadrature => {
            bargmann_bf_quadrature(&bargmann_bs_inverse_quadrature(f, unit, plane)?, n, hermite)
        }
    })
}

/// Integral-mode `Υ f` over several units; fails with `UnitDependence`
/// when the results spread by more than `tol`.
pub fn upsilon_unit_spread(
    f: &SliceSeries<f64>,
    units: &[ImaginaryUnit],
    rule: &PlaneRule,
    tol: f64,
) -> Result<f64> {
    let results = units
        .iter()
        .map(|u| upsilon_integral(f, u, rule))
        .collect::<Result<Vec<_>>>()?;
    let mut spread: f64 = 0.0;
    for a in &results {
        for b in &results {
            spread = spread.max(coeff_distance(a.coeffs(), b.coeffs()));
        }
    }
    if spread > tol {
        return Err(Error::UnitDependence(spread));
    }
    Ok(spread)
}

/// `∫_{C_ω} z̄^k z^j dμ(z)` on the slice of `unit`.
pub fn gaussian_moment_slice(
    k: usize,
    j: usize,
    rule: &PlaneRule,
    unit: &ImaginaryUnit,
) -> Result<QuaternionFloat> {
    rule.check_exact(k + j)?;
    Ok(rule.integrate_slice(unit, |z| &z.conj().pow(k as u32) * &z.pow(j as u32)))
}

/// Real part of the moment in the complex plane `C_i`; the imaginary part
/// vanishes by symmetry.
pub fn gaussian_moment(k: usize, j: usize, rule: &PlaneRule) -> Result<f64> {
    Ok(gaussian_moment_slice(k, j, rule, &ImaginaryUnit::i())?.x0)
}

/// `∫ L(q, z) conj(L(p, z)) dμ_i(z)` with `L` cut at `kmax`.
pub fn kernel_l_selfproduct(
    q: &QuaternionFloat,
    p: &QuaternionFloat,
    kmax: usize,
    rule: &PlaneRule,
    unit: &ImaginaryUnit,
) -> Result<QuaternionFloat> {
    rule.check_exact(2 * kmax)?;
    let qk = qk_eval_all(q, kmax);
    let pk = qk_eval_all(p, kmax);
    Ok(rule.integrate_slice(unit, |z| &kernel_l(&qk, z) * &kernel_l(&pk, z).conj()))
}

/// `∫ e^{x z̄} z^n dμ_i(z)` for real `x`.
pub fn exp_moment(x: f64, n: usize, rule: &PlaneRule, unit: &ImaginaryUnit) -> QuaternionFloat {
    rule.integrate_slice(unit, |z| &qexp(&z.conj().scale(&x)) * &z.pow(n as u32))
}

/// `∫ e^{x z̄ + y z} dμ_i(z)` for real `x`, `y`.
pub fn exp_pair_moment(x: f64, y: f64, rule: &PlaneRule, unit: &ImaginaryUnit) -> QuaternionFloat {
    rule.integrate_slice(unit, |z| qexp(&(z.conj().scale(&x) + z.scale(&y))))
}

pub fn coeff_distance(a: &[QuaternionFloat], b: &[QuaternionFloat]) -> f64 {
    let n = a.len().max(b.len());
    let zero = QuaternionFloat::zero();
    (0..n)
        .map(|k| a.get(k).unwrap_or(&zero).dist(b.get(k).unwrap_or(&zero)))
        .fold(0.0, f64::max)
}

/// Slice series `q^n / √n!` in the slice Fock space.
pub fn slice_fock_basis(n: usize) -> SliceSeries<f64> {
    SliceSeries::unit(n, WeightSequence::fock()).scale(&(1.0 / factorial_f64(n).sqrt()))
}

/// Quaternion coefficient vectors as read from and written to files.
pub fn parse_coefficients(json: &str) -> Result<Vec<QuaternionFloat>> {
    serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
}

pub fn coefficients_to_json(c: &[QuaternionFloat]) -> String {
    serde_json::to_string(c).expect("floats serialize")
}
