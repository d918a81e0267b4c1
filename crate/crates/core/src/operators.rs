//! Shift, annihilation and backward shift operators on Appell series.
//!
//! On the basis `Q_k` the creation operator `S` maps `Q_k` to `Q_{k+1}`, the
//! hypercomplex derivative maps `Q_k` to `k Q_{k-1}`, and the backward shift
//! maps `Q_k` to `Q_{k-1}`. All three act on coefficient vectors; the
//! symbolic checks below tie the coefficient actions back to the CK product.

use crate::appell::{ck, ck_product, qk_symbolic};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use crate::quat::Quaternion;
use crate::scalar::{Rational, Scalar};
use crate::spaces::{AppellSeries, WeightKind};

/// `S(Σ Q_k α_k) = Σ Q_{k+1} α_k`.
pub fn shift_s<T: Scalar>(f: &AppellSeries<T>) -> AppellSeries<T> {
    let mut coeffs = Vec::with_capacity(f.truncation() + 2);
    coeffs.push(Quaternion::zero());
    coeffs.extend_from_slice(f.coeffs());
    AppellSeries::new(coeffs, f.weight().clone())
}

/// `∂̄/2` on coefficients: `α'_k = (k+1) α_{k+1}`.
pub fn annihilate<T: Scalar>(f: &AppellSeries<T>) -> AppellSeries<T> {
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&T::from_i64(k as i64)))
        .collect();
    AppellSeries::new(coeffs, f.weight().clone())
}

/// Backward shift `M(Q_k) = Q_{k-1}`, `M(Q_0) = 0`.
pub fn backward_m<T: Scalar>(f: &AppellSeries<T>) -> AppellSeries<T> {
    AppellSeries::new(f.coeffs()[1..].to_vec(), f.weight().clone())
}

/// `T_γ(Q_k) = γ_k Q_{k+1}` with `γ_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedShiftSpec<T: Scalar> {
    gamma: Vec<T>,
}

impl<T: Scalar> WeightedShiftSpec<T> {
    pub fn new(gamma: Vec<T>) -> Result<Self> {
        if gamma.first() != Some(&T::one()) {
            return Err(Error::Domain("weighted shift needs γ_0 = 1".into()));
        }
        Ok(WeightedShiftSpec { gamma })
    }

    /// `γ_k = 1` for `k <= kmax`.
    pub fn constant_one(kmax: usize) -> Self {
        WeightedShiftSpec {
            gamma: vec![T::one(); kmax + 1],
        }
    }

    pub fn gamma(&self) -> &[T] {
        &self.gamma
    }

    fn get(&self, k: usize) -> Result<&T> {
        self.gamma
            .get(k)
            .ok_or_else(|| Error::Index(format!("γ_{k} not specified (have {})", self.gamma.len())))
    }
}

pub fn weighted_shift<T: Scalar>(
    spec: &WeightedShiftSpec<T>,
    f: &AppellSeries<T>,
) -> Result<AppellSeries<T>> {
    let mut coeffs = vec![Quaternion::zero()];
    for (k, c) in f.coeffs().iter().enumerate() {
        coeffs.push(c.scale(spec.get(k)?));
    }
    Ok(AppellSeries::new(coeffs, f.weight().clone()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaCheck {
    pub holds: bool,
    /// First `k` with `|(k+1)γ_k - kγ_{k-1} - 1| > tol`.
    pub first_failure: Option<usize>,
    pub max_defect: f64,
}

/// Tests `(k+1)γ_k - kγ_{k-1} = 1` for `1 <= k <= kmax`.
pub fn gamma_recurrence_check<T: Scalar>(
    spec: &WeightedShiftSpec<T>,
    kmax: usize,
    tol: f64,
) -> Result<GammaCheck> {
    let mut first_failure = None;
    let mut max_defect: f64 = 0.0;
    for k in 1..=kmax {
        let lhs = T::from_i64(k as i64 + 1) * spec.get(k)?.clone()
            - T::from_i64(k as i64) * spec.get(k - 1)?.clone();
        let d = (lhs - T::one()).abs_f64();
        max_defect = max_defect.max(d);
        if d > tol && first_failure.is_none() {
            first_failure = Some(k);
        }
    }
    Ok(GammaCheck {
        holds: first_failure.is_none(),
        first_failure,
        max_defect,
    })
}

/// The two composites `A = (∂̄/2) T_γ` and `B = T_γ (∂̄/2)` applied to `f`.
pub fn gamma_composites<T: Scalar>(
    spec: &WeightedShiftSpec<T>,
    f: &AppellSeries<T>,
) -> Result<(AppellSeries<T>, AppellSeries<T>)> {
    let a = annihilate(&weighted_shift(spec, f)?);
    let b = weighted_shift(spec, &annihilate(f))?;
    Ok((a, b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorReadings {
    /// `max_k |((A - B) f)_k - α_k|`: zero iff the difference is the identity on `f`.
    pub difference_defect: f64,
    /// `max_k |((AB - BA) f)_k|`; both composites are diagonal on `Q_k`, so
    /// the bracket of the two composites vanishes identically.
    pub bracket_size: f64,
}

pub fn gamma_commutator<T: Scalar>(
    spec: &WeightedShiftSpec<T>,
    f: &AppellSeries<T>,
) -> Result<CommutatorReadings> {
    let (af, bf) = gamma_composites(spec, f)?;
    let difference_defect = max_coeff_norm(&af.sub(&bf)?.sub(f)?);
    let a_bf = gamma_composites(spec, &bf)?.0;
    let b_af = gamma_composites(spec, &af)?.1;
    let bracket_size = max_coeff_norm(&a_bf.sub(&b_af)?);
    Ok(CommutatorReadings {
        difference_defect,
        bracket_size,
    })
}

/// `(∂̄/2) S - S (∂̄/2)` applied to `f`.
pub fn commutator_difference<T: Scalar>(f: &AppellSeries<T>) -> AppellSeries<T> {
    let a = annihilate(&shift_s(f));
    let b = shift_s(&annihilate(f));
    a.sub(&b).expect("same weight")
}

pub fn max_coeff_norm<T: Scalar>(f: &AppellSeries<T>) -> f64 {
    f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// `|⟨(∂̄/2) f, g⟩ - ⟨f, S g⟩|` in the Fock space.
pub fn adjoint_defect_s<T: Scalar>(f: &AppellSeries<T>, g: &AppellSeries<T>) -> Result<f64> {
    if *f.weight().kind() != WeightKind::Fock {
        return Err(Error::Domain(format!(
            "S is adjoint to ∂̄/2 only in the Fock space, not {}",
            f.weight()
        )));
    }
    let lhs = annihilate(f).inner(g)?;
    let rhs = f.inner(&shift_s(g))?;
    Ok((&lhs - &rhs).norm())
}

/// `|⟨M f, g⟩ - ⟨f, S g⟩|` in the Hardy space.
pub fn adjoint_defect_m<T: Scalar>(f: &AppellSeries<T>, g: &AppellSeries<T>) -> Result<f64> {
    if *f.weight().kind() != WeightKind::Hardy {
        return Err(Error::Domain(format!(
            "M is adjoint to S only in the Hardy space, not {}",
            f.weight()
        )));
    }
    let lhs = backward_m(f).inner(g)?;
    let rhs = f.inner(&shift_s(g))?;
    Ok((&lhs - &rhs).norm())
}

/// `‖S f‖² - ‖(∂̄/2) f‖² - ‖f‖²`, zero in the Fock space.
pub fn shift_norm_defect<T: Scalar>(f: &AppellSeries<T>) -> T {
    shift_s(f).norm_sqr() - annihilate(f).norm_sqr() - f.norm_sqr()
}

/// Checks `S(Q_k) = (c_{k+1} / (c_1 c_k)) Q_1 ⊙ Q_k` for `k <= kmax`.
pub fn shift_matches_ck_product(kmax: usize) -> Result<bool> {
    let q1 = qk_symbolic(1)?;
    for k in 0..=kmax {
        let prod = ck_product(&q1, &qk_symbolic(k)?)?;
        let factor = ck(k + 1) / (ck(1) * ck(k));
        if prod.scale(&factor) != qk_symbolic(k + 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `Q_1 ⊙ Q_{k-1} = (c_1 c_{k-1} / c_k) Q_k` for `1 <= k <= kmax`,
/// which is the forward form of `Q_1^{-⊙} ⊙ Q_k = (c_k / (c_1 c_{k-1})) Q_{k-1}`.
pub fn backward_m_matches_ck_inverse(kmax: usize) -> Result<bool> {
    let q1 = qk_symbolic(1)?;
    for k in 1..=kmax {
        let prod = ck_product(&q1, &qk_symbolic(k - 1)?)?;
        let factor = ck(1) * ck(k - 1) / ck(k);
        if prod != qk_symbolic(k)?.scale(&factor) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `∫_ε^1 (1/t) (∂̄/2)[f(t·)] dt` with a Gauss-Legendre rule of `nodes`
/// points on `[ε, 1]`.
///
/// At each node the dilated series `Σ Q_k t^k α_k` is annihilated and
/// divided by `t`; the weighted node values are summed coefficientwise.
pub fn backward_r_integral(
    f: &AppellSeries<f64>,
    nodes: usize,
    eps: f64,
) -> Result<AppellSeries<f64>> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain(format!("ε = {eps} not in [0, 1)")));
    }
    let rule = QuadratureRule::gauss_legendre(nodes, eps, 1.0);
    let n = f.truncation();
    let mut acc = vec![Quaternion::<f64>::zero(); n.max(1)];
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let dilated = AppellSeries::new(
            f.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale(&t.powi(k as i32)))
                .collect(),
            f.weight().clone(),
        );
        let d = annihilate(&dilated);
        for (a, c) in acc.iter_mut().zip(d.coeffs()) {
            *a += c.scale(&(w / t));
        }
    }
    Ok(AppellSeries::new(acc, f.weight().clone()).truncated(n.saturating_sub(1)))
}

/// `backward_r_integral` at `ε = 0`, refused when it strays from the
/// coefficient action of `M` by more than `tol`.
pub fn backward_r_checked(
    f: &AppellSeries<f64>,
    nodes: usize,
    tol: f64,
) -> Result<AppellSeries<f64>> {
    let r = backward_r_integral(f, nodes, 0.0)?;
    let defect = max_coeff_norm(&r.sub(&backward_m(f))?);
    if defect > tol {
        return Err(Error::QuadratureFailure {
            context: "backward shift integral vs coefficient action".into(),
            defect,
            tolerance: tol,
        });
    }
    Ok(r)
}

/// For each `ε`, the largest deviation of the partial integral from
/// `Σ Q_{k-1} (1 - ε^k) α_k`.
pub fn backward_r_eps_sweep(
    f: &AppellSeries<f64>,
    nodes: usize,
    eps: &[f64],
) -> Result<Vec<(f64, f64)>> {
    eps.iter()
        .map(|&e| {
            let r = backward_r_integral(f, nodes, e)?;
            let expect = AppellSeries::new(
                f.coeffs()
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| c.scale(&(1.0 - e.powi(k as i32))))
                    .collect(),
                f.weight().clone(),
            );
            Ok((e, max_coeff_norm(&r.sub(&expect)?)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BackwardInequality<T> {
    /// `‖R f‖²`.
    pub lhs: T,
    /// `‖f‖² - |f(0)|²`.
    pub rhs: T,
    pub holds: bool,
    pub equality: bool,
}

/// Both sides of `‖R f‖² <= ‖f‖² - |f(0)|²`; `f(0) = α_0` since
/// `Q_k(0) = 0` for `k >= 1`.
pub fn backward_inequality_check<T: Scalar>(
    f: &AppellSeries<T>,
    tol: f64,
) -> Result<BackwardInequality<T>> {
    let w = f.weight();
    if !w.non_decreasing() {
        return Err(Error::Domain(format!("weight {w} is not non-decreasing")));
    }
    let lhs = backward_m(f).norm_sqr();
    let rhs = f.norm_sqr() - f.coeff(0).norm_sqr();
    let gap = (rhs.clone() - lhs.clone()).to_f64();
    let scale = rhs.to_f64().abs().max(1.0);
    Ok(BackwardInequality {
        holds: gap >= -tol * scale,
        equality: gap.abs() <= tol * scale,
        lhs,
        rhs,
    })
}

/// `S (∂̄/2) Q_k = k Q_k` for `k <= kmax`.
pub fn number_operator_check(kmax: usize) -> bool {
    let w = crate::spaces::WeightSequence::fock();
    (0..=kmax).all(|k| {
        let q = AppellSeries::<Rational>::unit(k, w.clone());
        let lhs = shift_s(&annihilate(&q)).truncated(k);
        lhs == q.scale(&Rational::from_integer((k as i64).into()))
    })
}

/// `‖S f‖² - ‖f‖²` under the given weight; zero for Hardy.
pub fn shift_isometry_defect<T: Scalar>(f: &AppellSeries<T>) -> T {
    shift_s(f).norm_sqr() - f.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::spaces::WeightSequence;
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(5)
    }

    #[test]
    fn shift_examples() {
        let w = WeightSequence::fock();
        let q0 = AppellSeries::<Rational>::unit(0, w.clone());
        assert_eq!(shift_s(&q0), AppellSeries::unit(1, w.clone()));
        let mut r = rng();
        let f = AppellSeries::random_exact(&mut r, 8, w, 6);
        let sf = shift_s(&f);
        for k in 0..=8 {
            assert_eq!(sf.coeff(k + 1), f.coeff(k));
        }
        assert!(shift_norm_defect(&f).is_zero());
    }

    #[test]
    fn annihilate_examples() {
        let w = WeightSequence::hardy();
        assert!(annihilate(&AppellSeries::<Rational>::unit(0, w.clone())).is_zero());
        let q5 = AppellSeries::<Rational>::unit(5, w.clone());
        assert_eq!(
            annihilate(&q5),
            AppellSeries::unit(4, w.clone()).scale(&int(5))
        );
        let mut r = rng();
        for _ in 0..20 {
            let f = AppellSeries::random_exact(&mut r, 10, w.clone(), 5);
            assert_eq!(commutator_difference(&f).truncated(10), f);
        }
    }

    #[test]
    fn annihilate_agrees_with_hyper_derivative() {
        let mut r = rng();
        let f = AppellSeries::random_exact(&mut r, 7, WeightSequence::hardy(), 3);
        let poly = crate::appell::synthesize_appell(f.coeffs()).unwrap();
        let lhs = crate::poly::hyper_derivative(&poly);
        let rhs = crate::appell::synthesize_appell(annihilate(&f).coeffs()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gamma_recurrence() {
        let one = WeightedShiftSpec::<f64>::constant_one(30);
        assert!(gamma_recurrence_check(&one, 30, 1e-12).unwrap().holds);
        let bad = WeightedShiftSpec::new(vec![1.0, 0.9, 1.0]).unwrap();
        let c = gamma_recurrence_check(&bad, 2, 1e-12).unwrap();
        assert_eq!(c.first_failure, Some(1));
        assert!((c.max_defect - 0.2).abs() < 1e-12);
        assert!(WeightedShiftSpec::new(vec![0.5]).is_err());
        assert!(gamma_recurrence_check(&bad, 5, 1e-12).is_err());
    }

    #[test]
    fn gamma_commutator_iff_recurrence() {
        let mut r = rng();
        let f = AppellSeries::random_exact(&mut r, 6, WeightSequence::fock(), 4);
        let one = WeightedShiftSpec::<Rational>::constant_one(8);
        let c = gamma_commutator(&one, &f).unwrap();
        assert_eq!(c.difference_defect, 0.0);
        assert_eq!(c.bracket_size, 0.0);
        let bad = WeightedShiftSpec::new(vec![
            int(1),
            rat(9, 10),
            int(1),
            int(1),
            int(1),
            int(1),
            int(1),
            int(1),
        ])
        .unwrap();
        assert!(gamma_commutator(&bad, &f).unwrap().difference_defect > 0.0);
    }

    #[test]
    fn adjoint_examples() {
        let w = WeightSequence::fock();
        let f = AppellSeries::<Rational>::unit(3, w.clone());
        let g = AppellSeries::<Rational>::unit(2, w.clone());
        assert_eq!(adjoint_defect_s(&f, &g).unwrap(), 0.0);
        assert_eq!(
            annihilate(&f).inner(&g).unwrap(),
            Quaternion::from_real(int(6))
        );
        let z = AppellSeries::<Rational>::zero(w.clone(), 3);
        assert_eq!(adjoint_defect_s(&z, &g).unwrap(), 0.0);
        let h = f.clone().with_weight(WeightSequence::hardy());
        assert!(adjoint_defect_s(&h, &h).is_err());
        assert_eq!(adjoint_defect_m(&h, &h).unwrap(), 0.0);
    }

    #[test]
    fn backward_m_examples() {
        let w = WeightSequence::hardy();
        let q1 = AppellSeries::<Rational>::unit(1, w.clone());
        assert_eq!(backward_m(&q1), AppellSeries::unit(0, w.clone()));
        assert!(backward_m(&AppellSeries::<Rational>::unit(0, w)).is_zero());
    }

    #[test]
    fn ck_product_forms() {
        assert!(shift_matches_ck_product(4).unwrap());
        assert!(backward_m_matches_ck_inverse(4).unwrap());
    }

    #[test]
    fn integral_backward_shift() {
        let w = WeightSequence::hardy();
        for k in 0..=10 {
            let qk = AppellSeries::<f64>::unit(k, w.clone());
            let r = backward_r_checked(&qk, 64, 1e-10).unwrap();
            if k == 0 {
                assert!(r.is_zero());
            } else {
                assert!(
                    max_coeff_norm(&r.sub(&AppellSeries::unit(k - 1, w.clone())).unwrap()) < 1e-13
                );
            }
        }
        let mut r = rng();
        let f = AppellSeries::random_float(&mut r, 12, w);
        for (_, d) in backward_r_eps_sweep(&f, 64, &[1e-2, 1e-4, 1e-6]).unwrap() {
            assert!(d < 1e-13);
        }
        // Too few nodes for degree 40 integrands.
        let g = AppellSeries::<f64>::unit(40, WeightSequence::hardy());
        assert!(matches!(
            backward_r_checked(&g, 4, 1e-10),
            Err(Error::QuadratureFailure { .. })
        ));
    }

    #[test]
    fn backward_inequality() {
        let mut r = rng();
        let f = AppellSeries::random_exact(&mut r, 9, WeightSequence::hardy(), 5);
        let c = backward_inequality_check(&f, 0.0).unwrap();
        assert!(c.holds && c.equality);
        let g = f.clone().with_weight(WeightSequence::fock());
        let c = backward_inequality_check(&g, 0.0).unwrap();
        assert!(c.holds && !c.equality);
        let k = AppellSeries::<Rational>::unit(0, WeightSequence::fock()).scale(&int(3));
        let c = backward_inequality_check(&k, 0.0).unwrap();
        assert!(c.lhs.is_zero() && c.rhs.is_zero());
        let b = f.with_weight(WeightSequence::bergman());
        assert!(backward_inequality_check(&b, 0.0).is_err());
    }

    #[test]
    fn number_operator_and_isometry() {
        assert!(number_operator_check(20));
        let mut r = rng();
        let f = AppellSeries::random_exact(&mut r, 9, WeightSequence::hardy(), 5);
        assert!(shift_isometry_defect(&f).is_zero());
    }
}
