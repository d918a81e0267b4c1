//! Weighted coefficient spaces.
//!
//! `HM_b` is spanned by the Appell polynomials `Q_k` with
//! `‖Σ Q_k α_k‖² = Σ b_k |α_k|²`; `HS_c` is spanned by the slice monomials
//! `q^k` with weights `c_k`. Series are finite truncations and carry their
//! weight sequence, so inner products between different spaces are refused.

use std::fmt;
use std::marker::PhantomData;

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::appell::{exp_tail, qk_eval_all};
use crate::error::{Error, Result};
use crate::quat::{Quaternion, QuaternionExact, QuaternionFloat};
use crate::scalar::{factorial, int, rat, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum WeightKind {
    /// `b_k = 1`.
    Hardy,
    /// `b_k = k!`.
    Fock,
    /// `c_k = k`, with `c_0` raised to 1.
    Dirichlet,
    /// `c_k = 1/(k+1)`.
    Bergman,
    /// Explicit table; indices past the end repeat the last entry.
    Custom(Vec<Rational>),
    /// `b_k = c_{k+2} / ((k+1)² (k+2)²)` for the inner sequence `c`.
    Transported(Box<WeightSequence>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence {
    name: String,
    kind: WeightKind,
    non_decreasing: bool,
}

/// Indices scanned when recording the monotonicity flag.
const MONOTONE_SCAN: usize = 64;

impl WeightSequence {
    fn build(name: impl Into<String>, kind: WeightKind) -> Self {
        let mut w = WeightSequence {
            name: name.into(),
            kind,
            non_decreasing: false,
        };
        w.non_decreasing = (0..MONOTONE_SCAN).all(|k| w.value(k) <= w.value(k + 1));
        w
    }

    pub fn hardy() -> Self {
        Self::build("hardy", WeightKind::Hardy)
    }

    pub fn fock() -> Self {
        Self::build("fock", WeightKind::Fock)
    }

    pub fn dirichlet() -> Self {
        Self::build("dirichlet", WeightKind::Dirichlet)
    }

    pub fn bergman() -> Self {
        Self::build("bergman", WeightKind::Bergman)
    }

    pub fn custom(name: &str, values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain(
                "custom weight needs at least one value".into(),
            ));
        }
        if let Some(k) = values.iter().position(|v| *v <= Rational::zero()) {
            return Err(Error::Domain(format!(
                "custom weight value at k = {k} is not positive"
            )));
        }
        Ok(Self::build(name, WeightKind::Custom(values)))
    }

    /// The sequence `b` produced from `c` by the Fueter mapping.
    pub fn transported(c: &WeightSequence) -> Self {
        Self::build(
            format!("{}-fueter", c.name),
            WeightKind::Transported(Box::new(c.clone())),
        )
    }

    pub fn named(name: &str) -> Result<Self> {
        match name {
            "hardy" => Ok(Self::hardy()),
            "fock" => Ok(Self::fock()),
            "dirichlet" => Ok(Self::dirichlet()),
            "bergman" => Ok(Self::bergman()),
            other => Err(Error::Domain(format!("unknown weight {other:?}"))),
        }
    }

    pub fn named_weights() -> [WeightSequence; 4] {
        [
            Self::hardy(),
            Self::fock(),
            Self::dirichlet(),
            Self::bergman(),
        ]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// Recorded, never enforced.
    pub fn non_decreasing(&self) -> bool {
        self.non_decreasing
    }

    /// Set when the sequence differs from its defining formula at some index.
    pub fn override_note(&self) -> Option<&'static str> {
        match self.kind {
            WeightKind::Dirichlet => Some("c_0 raised from 0 to 1"),
            _ => None,
        }
    }

    pub fn value(&self, k: usize) -> Rational {
        match &self.kind {
            WeightKind::Hardy => Rational::one(),
            WeightKind::Fock => Rational::from_integer(factorial(k as u64)),
            WeightKind::Dirichlet => int(k.max(1) as i64),
            WeightKind::Bergman => rat(1, k as i64 + 1),
            WeightKind::Custom(v) => v[k.min(v.len() - 1)].clone(),
            WeightKind::Transported(c) => {
                let m = int(((k + 1) * (k + 2)) as i64);
                c.value(k + 2) / (&m * &m)
            }
        }
    }

    pub fn value_f64(&self, k: usize) -> f64 {
        self.value(k).to_f64()
    }

    /// `w_k / w_{k+1}` in floating point, without forming `w_k` itself.
    pub fn decay_ratio(&self, k: usize) -> f64 {
        let kf = k as f64;
        match &self.kind {
            WeightKind::Hardy => 1.0,
            WeightKind::Fock => 1.0 / (kf + 1.0),
            WeightKind::Dirichlet => {
                if k == 0 {
                    1.0
                } else {
                    kf / (kf + 1.0)
                }
            }
            WeightKind::Bergman => (kf + 2.0) / (kf + 1.0),
            WeightKind::Custom(v) => {
                if k + 1 >= v.len() {
                    1.0
                } else {
                    (&v[k] / &v[k + 1]).to_f64()
                }
            }
            WeightKind::Transported(c) => {
                let s = (kf + 3.0) / (kf + 1.0);
                c.decay_ratio(k + 2) * s * s
            }
        }
    }

    /// `lim w_k / w_{k+1}`, extrapolated from the ratio sequence and snapped
    /// to zero or to a four-digit value when within rounding.
    pub fn decay_limit(&self) -> f64 {
        let (r1, r2, r4) = (
            self.decay_ratio(1000),
            self.decay_ratio(2000),
            self.decay_ratio(4000),
        );
        // Richardson in 1/k, eliminating the first two correction terms.
        let ell = (8.0 * r4 - 6.0 * r2 + r1) / 3.0;
        if ell.abs() < 1e-6 {
            return 0.0;
        }
        let snapped = (ell * 1e4).round() / 1e4;
        if (ell - snapped).abs() < 1e-6 {
            snapped
        } else {
            ell
        }
    }

    /// Radius in `|q|` of the region where `Σ |q|^{2k} / w_k` converges;
    /// `None` when it converges everywhere.
    pub fn radius(&self) -> Option<f64> {
        let ell = self.decay_limit();
        (ell > 0.0).then(|| (1.0 / ell).sqrt())
    }

    /// Bound on `x = |q||p|` (or `|q|²`) for which the kernel series converge.
    fn check_inside(&self, x: f64, what: &str) -> Result<()> {
        if let Some(r) = self.radius() {
            if x >= r * r {
                return Err(Error::OutOfDomain(format!(
                    "{what} = {x} not below {} for weight {}",
                    r * r,
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// `Σ_{k>n} x^k / w_k` for `x >= 0`.
    ///
    /// Terms are summed until negligible, then closed with a geometric
    /// remainder whose ratio bounds every later term ratio (the ratio
    /// sequences here are monotone towards their limit).
    pub fn tail_sum(&self, x: f64, n: usize) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        match self.kind {
            WeightKind::Hardy if x < 1.0 => return x.powi(n as i32 + 1) / (1.0 - x),
            WeightKind::Fock => return exp_tail(x, n),
            _ => {}
        }
        let limit = x * self.decay_limit();
        let mut term = 1.0 / self.value_f64(0);
        for k in 0..=n {
            if k > 0 {
                term *= x * self.decay_ratio(k - 1);
            }
        }
        let mut tail = 0.0;
        let mut k = n;
        while k < n + 1_000_000 {
            term *= x * self.decay_ratio(k);
            k += 1;
            tail += term;
            let rho = (x * self.decay_ratio(k)).max(limit);
            if rho < 1.0 && term * rho / (1.0 - rho) <= 1e-17 * tail.max(f64::MIN_POSITIVE) {
                return tail + term * rho / (1.0 - rho);
            }
            if term == 0.0 {
                return tail;
            }
        }
        f64::INFINITY
    }

    /// `Σ_{k>=0} x^k / w_k`.
    pub fn series_sum(&self, x: f64) -> f64 {
        match self.kind {
            WeightKind::Hardy if x < 1.0 => 1.0 / (1.0 - x),
            WeightKind::Fock => x.exp(),
            _ => 1.0 / self.value_f64(0) + self.tail_sum(x, 0),
        }
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Basis of a coefficient space.
pub trait Basis: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    const NAME: &'static str;
    /// Basis values `e_0(q), ..., e_n(q)`.
    fn values<T: Scalar>(q: &Quaternion<T>, n: usize) -> Vec<Quaternion<T>>;
}

/// Clifford-Appell polynomials `Q_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Appell;

/// Slice monomials `q^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice;

impl Basis for Appell {
    const NAME: &'static str = "appell";

    fn values<T: Scalar>(q: &Quaternion<T>, n: usize) -> Vec<Quaternion<T>> {
        qk_eval_all(q, n)
    }
}

impl Basis for Slice {
    const NAME: &'static str = "slice";

    fn values<T: Scalar>(q: &Quaternion<T>, n: usize) -> Vec<Quaternion<T>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(Quaternion::one());
        for k in 1..=n {
            let next = &out[k - 1] * q;
            out.push(next);
        }
        out
    }
}

/// `Σ_{k<=N} e_k(q) α_k` with the coefficients on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<T: Scalar, B: Basis> {
    coeffs: Vec<Quaternion<T>>,
    weight: WeightSequence,
    basis: PhantomData<B>,
}

pub type AppellSeries<T> = Series<T, Appell>;
pub type SliceSeries<T> = Series<T, Slice>;

impl<T: Scalar, B: Basis> Series<T, B> {
    /// An empty coefficient list is read as the zero series with `N = 0`.
    pub fn new(mut coeffs: Vec<Quaternion<T>>, weight: WeightSequence) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Quaternion::zero());
        }
        Series {
            coeffs,
            weight,
            basis: PhantomData,
        }
    }

    pub fn zero(weight: WeightSequence, n: usize) -> Self {
        Self::new(vec![Quaternion::zero(); n + 1], weight)
    }

    /// The basis element `e_k` itself.
    pub fn unit(k: usize, weight: WeightSequence) -> Self {
        let mut coeffs = vec![Quaternion::zero(); k + 1];
        coeffs[k] = Quaternion::one();
        Self::new(coeffs, weight)
    }

    pub fn coeffs(&self) -> &[Quaternion<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Quaternion<T>> {
        self.coeffs
    }

    /// Zero past the truncation.
    pub fn coeff(&self, k: usize) -> Quaternion<T> {
        self.coeffs.get(k).cloned().unwrap_or_else(Quaternion::zero)
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn weight(&self) -> &WeightSequence {
        &self.weight
    }

    pub fn with_weight(mut self, weight: WeightSequence) -> Self {
        self.weight = weight;
        self
    }

    /// Pads with zeros or cuts to truncation `n`.
    pub fn truncated(&self, n: usize) -> Self {
        Self::new(
            (0..=n).map(|k| self.coeff(k)).collect(),
            self.weight.clone(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn same_weight(&self, other: &Self) -> Result<()> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch(
                self.weight.name.clone(),
                other.weight.name.clone(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_weight(other)?;
        let n = self.truncation().max(other.truncation());
        let coeffs = (0..=n).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        Ok(Self::new(coeffs, self.weight.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_weight(other)?;
        let n = self.truncation().max(other.truncation());
        let coeffs = (0..=n).map(|k| &self.coeff(k) - &other.coeff(k)).collect();
        Ok(Self::new(coeffs, self.weight.clone()))
    }

    /// `f λ`: every coefficient multiplied by `λ` on the right.
    pub fn right_mul(&self, lambda: &Quaternion<T>) -> Self {
        Self::new(
            self.coeffs.iter().map(|c| c * lambda).collect(),
            self.weight.clone(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(
            self.coeffs.iter().map(|c| c.scale(s)).collect(),
            self.weight.clone(),
        )
    }

    /// `Σ w_k conj(α_k) β_k`.
    pub fn inner(&self, other: &Self) -> Result<Quaternion<T>> {
        self.same_weight(other)?;
        let n = self.truncation().min(other.truncation());
        let mut acc = Quaternion::zero();
        for k in 0..=n {
            let w = T::from_rational(&self.weight.value(k));
            acc += (&self.coeffs[k].conj() * &other.coeffs[k]).scale(&w);
        }
        Ok(acc)
    }

    /// `Σ w_k |α_k|²`.
    pub fn norm_sqr(&self) -> T {
        let mut acc = T::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc = acc + T::from_rational(&self.weight.value(k)) * c.norm_sqr();
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().to_f64().sqrt()
    }

    pub fn eval(&self, q: &Quaternion<T>) -> Quaternion<T> {
        let vals = B::values(q, self.truncation());
        let mut acc = Quaternion::zero();
        for (v, c) in vals.iter().zip(&self.coeffs) {
            acc += v * c;
        }
        acc
    }

    pub fn to_float(&self) -> Series<f64, B> {
        Series::new(
            self.coeffs.iter().map(|c| c.to_float()).collect(),
            self.weight.clone(),
        )
    }
}

impl<B: Basis> Series<Rational, B> {
    /// Coefficients with numerators in `[-bound, bound]` and denominators
    /// in `1..=bound`.
    pub fn random_exact<R: Rng + ?Sized>(
        rng: &mut R,
        n: usize,
        weight: WeightSequence,
        bound: i64,
    ) -> Self {
        let coeffs = (0..=n)
            .map(|_| random_exact_quaternion(rng, bound))
            .collect();
        Self::new(coeffs, weight)
    }
}

impl<B: Basis> Series<f64, B> {
    /// Coefficients with independent components uniform in `[-1, 1]`.
    pub fn random_float<R: Rng + ?Sized>(rng: &mut R, n: usize, weight: WeightSequence) -> Self {
        let coeffs = (0..=n).map(|_| random_float_quaternion(rng)).collect();
        Self::new(coeffs, weight)
    }
}

pub fn random_exact_quaternion<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> QuaternionExact {
    let mut c = || rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound));
    Quaternion::new(c(), c(), c(), c())
}

pub fn random_float_quaternion<R: Rng + ?Sized>(rng: &mut R) -> QuaternionFloat {
    let mut c = || rng.gen_range(-1.0..=1.0);
    Quaternion::new(c(), c(), c(), c())
}

/// `(Σ |q|^{2k} / w_k)^{1/2} ‖f‖`, which dominates `|f(q)|` because
/// `|Q_k(q)| <= |q|^k`.
pub fn pointwise_bound<T: Scalar, B: Basis>(f: &Series<T, B>, q: &QuaternionFloat) -> Result<f64> {
    let x = q.norm_sqr();
    f.weight.check_inside(x, "|q|²")?;
    let norm = f.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(f.weight.series_sum(x).sqrt() * norm)
}

/// Truncated kernel `Σ_{k<=n} Q_k(q) conj(Q_k(p)) / w_k` and the bound
/// `Σ_{k>n} (|q||p|)^k / w_k` on the omitted part.
pub fn kernel_eval(
    weight: &WeightSequence,
    q: &QuaternionFloat,
    p: &QuaternionFloat,
    n: usize,
) -> Result<(QuaternionFloat, f64)> {
    // Both points must lie in the domain of the space, not just their product.
    weight.check_inside(q.norm_sqr(), "|q|²")?;
    weight.check_inside(p.norm_sqr(), "|p|²")?;
    let x = q.norm() * p.norm();
    let qv = qk_eval_all(q, n);
    let pv = qk_eval_all(p, n);
    let mut acc = QuaternionFloat::zero();
    for k in 0..=n {
        acc += (&qv[k] * &pv[k].conj()).scale(&(1.0 / weight.value_f64(k)));
    }
    Ok((acc, weight.tail_sum(x, n)))
}

/// The section `K_p = Σ Q_k conj(Q_k(p)) / w_k` as a series in `q`.
pub fn kernel_section<T: Scalar>(
    weight: &WeightSequence,
    p: &Quaternion<T>,
    n: usize,
) -> AppellSeries<T> {
    let coeffs = qk_eval_all(p, n)
        .iter()
        .enumerate()
        .map(|(k, v)| {
            v.conj()
                .scale(&(T::one() / T::from_rational(&weight.value(k))))
        })
        .collect();
    AppellSeries::new(coeffs, weight.clone())
}

/// `|⟨K_p, f⟩ - f(p)|` with the kernel cut at the truncation of `f`.
pub fn reproducing_check<T: Scalar>(p: &Quaternion<T>, f: &AppellSeries<T>) -> Result<f64> {
    let section = kernel_section(f.weight(), p, f.truncation());
    let lhs = section.inner(f)?;
    Ok((&lhs - &f.eval(p)).norm())
}

/// CSV rows `q, p, K(q, p), tail` evaluated in parallel.
pub fn kernel_grid_csv(
    weight: &WeightSequence,
    pairs: &[(QuaternionFloat, QuaternionFloat)],
    n: usize,
) -> Result<String> {
    let rows: Vec<String> = pairs
        .par_iter()
        .map(|(q, p)| {
            let (k, tail) = kernel_eval(weight, q, p, n)?;
            let cells: Vec<String> = q
                .to_array()
                .iter()
                .chain(p.to_array().iter())
                .chain(k.to_array().iter())
                .chain(std::iter::once(&tail))
                .map(|v| format!("{v:e}"))
                .collect();
            Ok(cells.join(","))
        })
        .collect::<Result<_>>()?;
    let mut out = String::from("x0_q,x1_q,x2_q,x3_q,x0_p,x1_p,x2_p,x3_p,re_K,i_K,j_K,k_K,tail\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}
