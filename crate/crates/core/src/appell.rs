//! The Clifford-Appell system `Q_k(q) = Σ_j T^k_j q^{k-j} q̄^j`.
//!
//! `Q_k` is Fueter regular, satisfies `(∂̄/2) Q_k = k Q_{k-1}`, equals `t^k`
//! on the real axis and restricts to `c_k v^k` on the hyperplane `x0 = 0`
//! (`v` the vector part). Coefficient rows, `c_k` and the symbolic
//! polynomials are memoised process-wide.

use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{
    ck_extension, embed_q, embed_qbar, fueter_operator, is_fueter_regular, vector_q, QPoly,
    DEFAULT_DEGREE_CAP,
};
use crate::quat::{sample_sphere, ImaginaryUnit, Quaternion, QuaternionExact, QuaternionFloat};
use crate::scalar::{factorial_f64, int, Rational, Scalar};

/// `T^k_j = 2(k-j+1)/((k+1)(k+2))`.
pub fn tjk(k: usize, j: usize) -> Result<Rational> {
    if j > k {
        return Err(Error::Index(format!("T^{k}_{j} needs j <= k")));
    }
    Ok(Rational::new(
        (2 * (k - j + 1)).into(),
        ((k + 1) * (k + 2)).into(),
    ))
}

/// Rising factorial `(a)_n = a(a+1)...(a+n-1)`.
pub fn pochhammer(a: i64, n: usize) -> Rational {
    (0..n as i64).fold(Rational::one(), |acc, m| acc * int(a + m))
}

/// `T^k_j` through the Pochhammer form `k!/(3)_k · (2)_{k-j}(1)_j/((k-j)! j!)`.
pub fn tjk_pochhammer(k: usize, j: usize) -> Result<Rational> {
    if j > k {
        return Err(Error::Index(format!("T^{k}_{j} needs j <= k")));
    }
    let fact = |n: usize| pochhammer(1, n);
    Ok(
        fact(k) / pochhammer(3, k) * pochhammer(2, k - j) * pochhammer(1, j)
            / (fact(k - j) * fact(j)),
    )
}

fn ck_cache() -> &'static RwLock<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

/// `c_k = Σ_j (-1)^j T^k_j`.
pub fn ck(k: usize) -> Rational {
    if let Some(v) = ck_cache().read().unwrap().get(k) {
        return v.clone();
    }
    let mut cache = ck_cache().write().unwrap();
    while cache.len() <= k {
        let l = cache.len();
        let v = (0..=l).fold(Rational::zero(), |acc, j| {
            let t = tjk(l, j).expect("j <= l");
            if j % 2 == 0 {
                acc + t
            } else {
                acc - t
            }
        });
        cache.push(v);
    }
    cache[k].clone()
}

fn qk_cache() -> &'static RwLock<Vec<QPoly>> {
    static CACHE: OnceLock<RwLock<Vec<QPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

/// `Q_k` as a polynomial in `x0..x3`, for `k` up to the default cap.
pub fn qk_symbolic(k: usize) -> Result<QPoly> {
    qk_symbolic_capped(k, DEFAULT_DEGREE_CAP)
}

pub fn qk_symbolic_capped(k: usize, cap: u32) -> Result<QPoly> {
    if k as u32 > cap {
        return Err(Error::DegreeCapExceeded {
            degree: k as u32,
            cap,
        });
    }
    if let Some(p) = qk_cache().read().unwrap().get(k) {
        return Ok(p.clone());
    }
    let built = build_qk(k, cap)?;
    let mut cache = qk_cache().write().unwrap();
    // Cache only the contiguous prefix so that `get(k)` stays meaningful.
    if cache.len() == k {
        cache.push(built.clone());
    }
    Ok(built)
}

fn build_qk(k: usize, cap: u32) -> Result<QPoly> {
    let (q, qb) = (embed_q(), embed_qbar());
    let mut pq = vec![QPoly::one()];
    let mut pqb = vec![QPoly::one()];
    for m in 1..=k {
        pq.push(pq[m - 1].mul_capped(&q, cap)?);
        pqb.push(pqb[m - 1].mul_capped(&qb, cap)?);
    }
    let mut out = QPoly::zero();
    for j in 0..=k {
        let term = pq[k - j].mul_capped(&pqb[j], cap)?.scale(&tjk(k, j)?);
        out = out.add(&term);
    }
    Ok(out)
}

/// `P_k = Q_k / c_k`, which multiply as `P_k ⊙ P_s = P_{k+s}`.
pub fn pk_symbolic(k: usize) -> Result<QPoly> {
    Ok(qk_symbolic(k)?.scale(&(Rational::one() / ck(k))))
}

/// Values `Q_0(q), ..., Q_kmax(q)` in `O(kmax)` operations.
///
/// `q` and `q̄` commute, so with `P_k = Σ_j q^{k-j} q̄^j` and
/// `S_k = Σ_j (k-j+1) q^{k-j} q̄^j` one has `P_k = q P_{k-1} + q̄^k`,
/// `S_k = q S_{k-1} + P_k` and `Q_k = 2 S_k / ((k+1)(k+2))`.
pub fn qk_eval_all<T: Scalar>(q: &Quaternion<T>, kmax: usize) -> Vec<Quaternion<T>> {
    let qb = q.conj();
    let mut out = Vec::with_capacity(kmax + 1);
    let mut qb_pow = Quaternion::<T>::one();
    let mut p = Quaternion::<T>::one();
    let mut s = Quaternion::<T>::one();
    out.push(Quaternion::<T>::one());
    for k in 1..=kmax {
        qb_pow = &qb_pow * &qb;
        p = &(q * &p) + &qb_pow;
        s = &(q * &s) + &p;
        let t = T::from_i64(2) / T::from_i64(((k + 1) * (k + 2)) as i64);
        out.push(s.scale(&t));
    }
    out
}

pub fn qk_eval<T: Scalar>(k: usize, q: &Quaternion<T>) -> Quaternion<T> {
    qk_eval_all(q, k).pop().expect("non-empty")
}

/// CK product: extension of the pointwise product of the restrictions
/// to `x0 = 0`.
pub fn ck_product(f: &QPoly, g: &QPoly) -> Result<QPoly> {
    if !is_fueter_regular(f) || !is_fueter_regular(g) {
        return Err(Error::NotRegular);
    }
    ck_extension(&f.restrict_x0().checked_mul(&g.restrict_x0())?)
}

/// Gegenbauer polynomial `C^ν_n(t)` by the three-term recurrence.
pub fn gegenbauer(n: usize, nu: f64, t: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * nu * t,
        _ => {
            let (mut prev, mut cur) = (1.0, 2.0 * nu * t);
            for m in 2..=n {
                let m = m as f64;
                let next = (2.0 * t * (m + nu - 1.0) * cur - (m + 2.0 * nu - 2.0) * prev) / m;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Outcome of fitting the Gegenbauer closed form to `CK(v^n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GegenbauerFit {
    pub n: usize,
    /// Least-squares scalar `κ` with `CK(v^n) ≈ κ · G_n`.
    pub constant: f64,
    /// `κ^{1/n}` when `κ > 0`, the would-be `λ_0`.
    pub lambda0: Option<f64>,
    pub residual: f64,
}

/// `r^n (C^1_n(x0/r) + 2/(n+2) C^2_{n-1}(x0/r) v/r)` with `r = |q|`.
pub fn gegenbauer_form(n: usize, q: &QuaternionFloat) -> QuaternionFloat {
    let r = q.norm();
    let t = q.x0 / r;
    let rn = r.powi(n as i32);
    let scalar = rn * gegenbauer(n, 1.0, t);
    let vec_coeff = if n == 0 {
        0.0
    } else {
        rn * 2.0 / (n as f64 + 2.0) * gegenbauer(n - 1, 2.0, t) / r
    };
    let mut out = q.vector().scale(&vec_coeff);
    out.x0 = scalar;
    out
}

/// Default grid of non-real points for [`gegenbauer_ck_check`].
pub fn gegenbauer_grid(seed: u64, count: usize) -> Vec<QuaternionFloat> {
    (0..count)
        .map(|m| {
            let w = sample_sphere(seed.wrapping_mul(1_000_003).wrapping_add(m as u64));
            let x0 = -1.2 + 2.4 * (m as f64 + 0.5) / count as f64;
            let r = 0.3 + 0.9 * ((m * 7 % count) as f64 + 0.5) / count as f64;
            w.slice_point(x0, r)
        })
        .collect()
}

pub fn gegenbauer_ck_check(n: usize) -> Result<GegenbauerFit> {
    gegenbauer_ck_check_on(n, &gegenbauer_grid(0, 24))
}

/// Fits the single scalar in front of the Gegenbauer form against the
/// exact `CK(v^n)` on the given non-real points.
pub fn gegenbauer_ck_check_on(n: usize, points: &[QuaternionFloat]) -> Result<GegenbauerFit> {
    if n == 0 {
        return Err(Error::Domain("Gegenbauer check needs n >= 1".into()));
    }
    let exact = ck_extension(&vector_q().pow_capped(n as u32, DEFAULT_DEGREE_CAP)?)?;
    let pairs: Vec<(QuaternionFloat, QuaternionFloat)> = points
        .iter()
        .filter(|p| p.vector().norm() > 1e-12)
        .map(|p| (exact.eval(p), gegenbauer_form(n, p)))
        .collect();
    let dot = |a: &QuaternionFloat, b: &QuaternionFloat| {
        a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3
    };
    let num: f64 = pairs.iter().map(|(f, g)| dot(f, g)).sum();
    let den: f64 = pairs.iter().map(|(_, g)| dot(g, g)).sum();
    let constant = num / den;
    let residual = pairs
        .iter()
        .map(|(f, g)| f.dist(&g.scale(&constant)))
        .fold(0.0, f64::max);
    Ok(GegenbauerFit {
        n,
        constant,
        lambda0: (constant > 0.0).then(|| constant.powf(1.0 / n as f64)),
        residual,
    })
}

/// Partial sum of `Exp(q) = Σ Q_k(q)/k!` and the bound `Σ_{k>N} |q|^k/k!`.
pub fn exp_truncated(q: &QuaternionFloat, n: usize) -> (QuaternionFloat, f64) {
    let vals = qk_eval_all(q, n);
    let mut sum = QuaternionFloat::zero();
    for (k, v) in vals.iter().enumerate() {
        sum += v.scale(&(1.0 / factorial_f64(k)));
    }
    (sum, exp_tail(q.norm(), n))
}

/// `Σ_{k>n} x^k/k!` for `x >= 0`.
pub(crate) fn exp_tail(x: f64, n: usize) -> f64 {
    let mut term = (0..=n).fold(1.0, |t, k| if k == 0 { t } else { t * x / k as f64 });
    let mut tail = 0.0;
    let mut k = n;
    loop {
        k += 1;
        term *= x / k as f64;
        tail += term;
        let ratio = x / (k + 1) as f64;
        if ratio < 0.5 && term * ratio / (1.0 - ratio) <= tail * 1e-17 {
            return tail + term * ratio / (1.0 - ratio);
        }
        if term == 0.0 {
            return tail;
        }
    }
}

/// Fueter variable `ζ_l = x_l - e_l x0`, l in 1..=3.
pub fn fueter_variable(l: usize) -> Result<QPoly> {
    if !(1..=3).contains(&l) {
        return Err(Error::Index(format!(
            "Fueter variable index {l} not in 1..=3"
        )));
    }
    Ok(QPoly::var(l).sub(&QPoly::var(0).left_mul(&QuaternionExact::unit(l))))
}

/// `f(x0 + ω r) = A(x0, r) + ω B(x0, r)`, with `A` and `B` stored as
/// polynomials whose variable slots 0 and 1 hold `x0` and `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxialParts {
    pub a: QPoly,
    pub b: QPoly,
}

impl AxialParts {
    pub fn eval(&self, x0: f64, r: f64, omega: &ImaginaryUnit) -> QuaternionFloat {
        let pt = Quaternion::new(x0, r, 0.0, 0.0);
        self.a.eval(&pt) + omega.as_quaternion() * &self.b.eval(&pt)
    }
}

const AXIAL_SPHERE_SAMPLES: usize = 8;
const AXIAL_TOLERANCE: f64 = 1e-10;

/// Splits an axial polynomial into its `(A, B)` parts.
///
/// On the slice `C_i` one has `f(x0 + ir) = A + iB`, so `A` is the part even
/// in `r` and `iB` the odd part. Axiality is tested by comparing against
/// direct evaluation at several points of the sphere for each `(x0, r)`.
pub fn axial_decompose(f: &QPoly) -> Result<AxialParts> {
    let on_slice = f.restrict_to_x0_x1();
    let mut even = QPoly::zero();
    let mut odd = QPoly::zero();
    for (e, c) in on_slice.terms() {
        let m = QPoly::monomial(c.clone(), *e);
        if e[1] % 2 == 0 {
            even = even.add(&m);
        } else {
            odd = odd.add(&m);
        }
    }
    let parts = AxialParts {
        a: even,
        b: odd.left_mul(&QuaternionExact::i().conj()),
    };
    let grid = [(0.3, 0.5), (-0.7, 1.1), (1.4, 0.2), (0.0, 0.9), (-1.3, 1.6)];
    let mut seed = 0u64;
    for &(x0, r) in &grid {
        for _ in 0..AXIAL_SPHERE_SAMPLES {
            let omega = sample_sphere(0xA11A_u64 + seed);
            seed += 1;
            let direct = f.eval(&omega.slice_point(x0, r));
            let recon = parts.eval(x0, r, &omega);
            let scale = direct.norm().max(1.0);
            if direct.dist(&recon) > AXIAL_TOLERANCE * scale {
                return Err(Error::NotAxial(format!(
                    "defect {:.3e} at x0 = {x0}, r = {r}",
                    direct.dist(&recon)
                )));
            }
        }
    }
    Ok(parts)
}

/// `Σ_k Q_k α_k` as a polynomial (coefficients `α_k` on the right).
pub fn synthesize_appell(alpha: &[QuaternionExact]) -> Result<QPoly> {
    let mut out = QPoly::zero();
    for (k, a) in alpha.iter().enumerate() {
        if !a.is_zero() {
            out = out.add(&qk_symbolic(k)?.right_mul(a));
        }
    }
    Ok(out)
}

/// `Σ_k q^k a_k` as a polynomial.
pub fn synthesize_slice(a: &[QuaternionExact]) -> Result<QPoly> {
    let q = embed_q();
    let mut power = QPoly::one();
    let mut out = QPoly::zero();
    for (k, c) in a.iter().enumerate() {
        if k > 0 {
            power = power.checked_mul(&q)?;
        }
        out = out.add(&power.right_mul(c));
    }
    Ok(out)
}

/// Coefficients `α_k` with `g = Σ Q_k α_k`, read off the real axis where
/// `Q_k(t) = t^k` and then re-verified symbolically.
pub fn appell_expand(g: &QPoly) -> Result<Vec<QuaternionExact>> {
    if !fueter_operator(g).is_zero() {
        return Err(Error::NotRegular);
    }
    axial_decompose(g)?;
    let mut alpha = g.slice_taylor_real();
    while alpha.last().is_some_and(|a| a.is_zero()) {
        alpha.pop();
    }
    if synthesize_appell(&alpha)? != *g {
        return Err(Error::ExpansionMismatch);
    }
    Ok(alpha)
}

/// Rows `(k, j, T^k_j)` for `k <= kmax`.
pub fn tjk_table(kmax: usize) -> Vec<(usize, usize, Rational)> {
    (0..=kmax)
        .flat_map(|k| (0..=k).map(move |j| (k, j, tjk(k, j).expect("j <= k"))))
        .collect()
}

pub fn ck_table(kmax: usize) -> Vec<(usize, Rational)> {
    (0..=kmax).map(|k| (k, ck(k))).collect()
}

/// `Q_k(v) = c_k v^k` on `x0 = 0`; used as a structural check.
pub fn restriction_matches_ck(k: usize) -> Result<bool> {
    let lhs = qk_symbolic(k)?.restrict_x0();
    let rhs = vector_q()
        .pow_capped(k as u32, DEFAULT_DEGREE_CAP)?
        .scale(&ck(k));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{hyper_derivative, laplacian4, DEFAULT_DEGREE_CAP};
    use crate::scalar::rat;

    fn qc(a: i64, b: i64, c: i64, d: i64) -> QuaternionExact {
        QuaternionExact::from_ints(a, b, c, d)
    }

    #[test]
    fn coefficient_values() {
        assert_eq!(tjk(0, 0).unwrap(), rat(1, 1));
        assert_eq!(tjk(1, 0).unwrap(), rat(2, 3));
        assert_eq!(tjk(4, 2).unwrap(), rat(1, 5));
        assert!(matches!(tjk(2, 3), Err(Error::Index(_))));
        for k in 0..20 {
            for j in 0..=k {
                assert_eq!(tjk(k, j).unwrap(), tjk_pochhammer(k, j).unwrap());
            }
        }
        assert_eq!(ck(0), rat(1, 1));
        assert_eq!(ck(1), rat(1, 3));
        assert_eq!(ck(2), rat(1, 3));
        assert_eq!(ck(3), rat(1, 5));
        assert_eq!(ck(5), rat(1, 7));
    }

    #[test]
    fn low_order_polynomials() {
        let v = vector_q();
        let q1 = QPoly::var(0).add(&v.scale(&rat(1, 3)));
        assert_eq!(qk_symbolic(1).unwrap(), q1);
        let x0sq = QPoly::var(0).checked_mul(&QPoly::var(0)).unwrap();
        let vsq_norm = (1..4).fold(QPoly::zero(), |acc, l| {
            acc.add(&QPoly::var(l).checked_mul(&QPoly::var(l)).unwrap())
        });
        let q2 = x0sq
            .sub(&vsq_norm.scale(&rat(1, 3)))
            .add(&QPoly::var(0).checked_mul(&v).unwrap().scale(&rat(2, 3)));
        assert_eq!(qk_symbolic(2).unwrap(), q2);
        assert_eq!(
            qk_symbolic(2).unwrap().restrict_x0(),
            v.checked_mul(&v).unwrap().scale(&rat(1, 3))
        );
    }

    #[test]
    fn real_axis_and_regularity() {
        for k in 0..=8 {
            let p = qk_symbolic(k).unwrap();
            assert!(fueter_operator(&p).is_zero());
            assert!(laplacian4(&p).is_zero());
            let t = QuaternionFloat::from_real(0.7);
            assert!((qk_eval(k, &t).x0 - 0.7f64.powi(k as i32)).abs() < 1e-15);
            assert_eq!(p.slice_taylor_real().len(), k + 1);
            assert!(restriction_matches_ck(k).unwrap());
        }
        let q3 = qk_symbolic(3).unwrap().slice_taylor_real();
        assert_eq!(
            q3,
            vec![
                qc(0, 0, 0, 0),
                qc(0, 0, 0, 0),
                qc(0, 0, 0, 0),
                qc(1, 0, 0, 0)
            ]
        );
        assert_eq!(
            hyper_derivative(&qk_symbolic(5).unwrap()),
            qk_symbolic(4).unwrap().scale(&int(5))
        );
        assert!(matches!(
            qk_symbolic(DEFAULT_DEGREE_CAP as usize + 1),
            Err(Error::DegreeCapExceeded { .. })
        ));
    }

    #[test]
    fn symbolic_and_numeric_evaluation_agree() {
        let q = Quaternion::new(0.4, -0.3, 0.8, 0.1);
        let vals = qk_eval_all(&q, 10);
        for (k, v) in vals.iter().enumerate() {
            let s = qk_symbolic(k).unwrap().eval(&q);
            assert!(v.dist(&s) < 1e-14, "k = {k}");
        }
        // The recurrence against the defining sum, exactly.
        let q = qc(2, -1, 3, 5).scale(&rat(1, 7));
        let vals = qk_eval_all(&q, 16);
        for (k, v) in vals.iter().enumerate() {
            let direct = (0..=k).fold(QuaternionExact::zero(), |acc, j| {
                &acc + &(&q.pow((k - j) as u32) * &q.conj().pow(j as u32))
                    .scale(&tjk(k, j).unwrap())
            });
            assert_eq!(v, &direct, "k = {k}");
        }
    }

    #[test]
    fn ck_products() {
        let q0 = qk_symbolic(0).unwrap();
        let q1 = qk_symbolic(1).unwrap();
        let q3 = qk_symbolic(3).unwrap();
        assert_eq!(ck_product(&q3, &q0).unwrap(), q3);
        assert_eq!(
            ck_product(&q1, &q1).unwrap(),
            qk_symbolic(2).unwrap().scale(&rat(1, 3))
        );
        let expected = ck(2) * ck(3) / ck(5);
        assert_eq!(expected, rat(7, 15));
        assert_eq!(
            ck_product(&qk_symbolic(2).unwrap(), &q3).unwrap(),
            qk_symbolic(5).unwrap().scale(&expected)
        );
        assert_eq!(
            ck_product(&pk_symbolic(2).unwrap(), &pk_symbolic(3).unwrap()).unwrap(),
            pk_symbolic(5).unwrap()
        );
        assert_eq!(pk_symbolic(0).unwrap(), QPoly::one());
        assert_eq!(
            pk_symbolic(4).unwrap().restrict_x0(),
            vector_q().pow_capped(4, 24).unwrap()
        );
        let not_regular = crate::poly::embed_q();
        assert_eq!(ck_product(&not_regular, &q1), Err(Error::NotRegular));
    }

    #[test]
    fn ck_extension_reproduces_qk() {
        for k in 0..=10u32 {
            let ext = ck_extension(&vector_q().pow_capped(k, 24).unwrap())
                .unwrap()
                .scale(&ck(k as usize));
            assert_eq!(ext, qk_symbolic(k as usize).unwrap());
        }
    }

    #[test]
    fn gegenbauer_fit() {
        for n in 1..=6 {
            let fit = gegenbauer_ck_check(n).unwrap();
            assert!(fit.residual < 1e-10, "n = {n}: {fit:?}");
            let other = gegenbauer_ck_check_on(n, &gegenbauer_grid(99, 17)).unwrap();
            assert!((fit.constant - other.constant).abs() < 1e-8);
        }
        assert!((gegenbauer_ck_check(1).unwrap().constant - 1.5).abs() < 1e-12);
        assert!((gegenbauer_ck_check(2).unwrap().constant - 1.0).abs() < 1e-12);
        assert!((gegenbauer(3, 1.0, 0.5) - (8.0 * 0.125 - 4.0 * 0.5)).abs() < 1e-15);
    }

    #[test]
    fn exponential() {
        let (e0, _) = exp_truncated(&QuaternionFloat::zero(), 10);
        assert_eq!(e0, QuaternionFloat::one());
        for t in [-3.0, -1.2, 0.5, 2.0, 3.0] {
            let (e, _) = exp_truncated(&QuaternionFloat::from_real(t), 30);
            assert!((e.x0 - f64::exp(t)).abs() < 1e-12 * f64::exp(t).max(1.0));
        }
        let q = Quaternion::new(0.5, 1.0, -0.7, 0.3);
        let (e, tail) = exp_truncated(&q, 12);
        assert!(e.norm() <= q.norm().exp() + tail);
        assert!(tail > 0.0 && tail < 1e-5);
    }

    #[test]
    fn fueter_variables() {
        let z1 = fueter_variable(1).unwrap();
        assert_eq!(
            z1,
            QPoly::var(1).sub(&QPoly::var(0).left_mul(&qc(0, 1, 0, 0)))
        );
        for l in 1..=3 {
            assert!(fueter_operator(&fueter_variable(l).unwrap()).is_zero());
        }
        assert_eq!(z1.eval(&QuaternionExact::i()), qc(1, 0, 0, 0));
        assert!(matches!(fueter_variable(4), Err(Error::Index(_))));
        assert!(matches!(fueter_variable(0), Err(Error::Index(_))));
    }

    #[test]
    fn axial_parts() {
        let p1 = axial_decompose(&qk_symbolic(1).unwrap()).unwrap();
        assert_eq!(p1.a, QPoly::var(0));
        assert_eq!(p1.b, QPoly::var(1).scale(&rat(1, 3)));
        let p2 = axial_decompose(&qk_symbolic(2).unwrap()).unwrap();
        let x0 = QPoly::var(0);
        let r = QPoly::var(1);
        assert_eq!(
            p2.a,
            x0.checked_mul(&x0)
                .unwrap()
                .sub(&r.checked_mul(&r).unwrap().scale(&rat(1, 3)))
        );
        assert_eq!(p2.b, x0.checked_mul(&r).unwrap().scale(&rat(2, 3)));
        for k in 0..8 {
            let parts = axial_decompose(&qk_symbolic(k).unwrap()).unwrap();
            assert!(parts.b.terms().all(|(e, _)| e[1] >= 1));
        }
        // x1 alone is not axial.
        assert!(matches!(
            axial_decompose(&QPoly::var(1)),
            Err(Error::NotAxial(_))
        ));
    }

    #[test]
    fn expansions() {
        let mut unit7 = vec![QuaternionExact::zero(); 8];
        unit7[7] = QuaternionExact::one();
        assert_eq!(appell_expand(&qk_symbolic(7).unwrap()).unwrap(), unit7);
        let g = qk_symbolic(2)
            .unwrap()
            .scale(&int(3))
            .sub(&QPoly::one().right_mul(&QuaternionExact::i()));
        assert_eq!(
            appell_expand(&g).unwrap(),
            vec![qc(0, -1, 0, 0), qc(0, 0, 0, 0), qc(3, 0, 0, 0)]
        );
        let q4 = crate::poly::embed_q().pow_capped(4, 24).unwrap();
        assert_eq!(
            appell_expand(&laplacian4(&q4)).unwrap(),
            vec![qc(0, 0, 0, 0), qc(0, 0, 0, 0), qc(-24, 0, 0, 0)]
        );
        assert_eq!(
            appell_expand(&crate::poly::embed_q()),
            Err(Error::NotRegular)
        );
        // Regular but not axial: the Fueter variable ζ_1.
        assert!(matches!(
            appell_expand(&fueter_variable(1).unwrap()),
            Err(Error::NotAxial(_))
        ));
    }
}
