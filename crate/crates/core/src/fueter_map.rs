//! The Fueter mapping `τ = Δ` on slice series and the weight transport it
//! induces.
//!
//! Since `Δ q^k = -2(k-1)k Q_{k-2}`, a slice series `Σ q^k a_k` with weight
//! `c` maps to the Appell series with `α_k = -2(k+1)(k+2) a_{k+2}`, and the
//! weight `b_k = c_{k+2} / ((k+1)²(k+2)²)` makes `τ` an isometry up to the
//! factor 2 on the part of `f` above degree one.

use num_traits::One;
use serde::Serialize;

use crate::appell::{appell_expand, synthesize_slice};
use crate::error::{Error, Result};
use crate::poly::laplacian4;
use crate::quat::Quaternion;
use crate::scalar::{factorial, format_rational, int, Rational, Scalar};
use crate::spaces::{AppellSeries, SliceSeries, WeightSequence};

/// `b_k = c_{k+2} / ((k+1)² (k+2)²)`.
pub fn b_from_c(c: &WeightSequence) -> WeightSequence {
    WeightSequence::transported(c)
}

/// `τ f` from coefficients: `α_k = -2(k+1)(k+2) a_{k+2}`.
pub fn tau_series<T: Scalar>(f: &SliceSeries<T>) -> AppellSeries<T> {
    let n = f.truncation();
    let coeffs = (2..=n.max(1))
        .map(|m| {
            f.coeff(m)
                .scale(&T::from_i64(-2 * (m as i64 - 1) * m as i64))
        })
        .collect();
    AppellSeries::new(coeffs, b_from_c(f.weight()))
}

/// `τ f` by applying the four-dimensional Laplacian to the synthesized
/// polynomial and expanding the result in the Appell basis.
pub fn tau_series_symbolic(f: &SliceSeries<Rational>) -> Result<AppellSeries<Rational>> {
    let g = laplacian4(&synthesize_slice(f.coeffs())?);
    let alpha = appell_expand(&g)?;
    let out = AppellSeries::new(alpha, b_from_c(f.weight()));
    Ok(out.truncated(f.truncation().saturating_sub(2)))
}

/// Coefficient mode, cross-checked against the symbolic chain.
pub fn tau_series_checked(f: &SliceSeries<Rational>) -> Result<AppellSeries<Rational>> {
    let a = tau_series(f);
    let b = tau_series_symbolic(f)?;
    if a != b {
        let k = (0..=a.truncation().max(b.truncation()))
            .find(|&k| a.coeff(k) != b.coeff(k))
            .unwrap_or(0);
        return Err(Error::ModeDisagreement(format!(
            "coefficient {k}: {} vs {}",
            a.coeff(k),
            b.coeff(k)
        )));
    }
    Ok(a)
}

/// Slice series `g` with `τ g = α`: `a_{k+2} = -α_k / (2(k+1)(k+2))`,
/// `a_0 = a_1 = 0`.
pub fn tau_preimage<T: Scalar>(alpha: &AppellSeries<T>, c: &WeightSequence) -> SliceSeries<T> {
    let mut coeffs = vec![Quaternion::zero(), Quaternion::zero()];
    for (k, a) in alpha.coeffs().iter().enumerate() {
        let d = T::from_i64(-2 * (k as i64 + 1) * (k as i64 + 2));
        coeffs.push(a.scale(&(T::one() / d)));
    }
    SliceSeries::new(coeffs, c.clone())
}

/// Squared sides of `‖τ f‖_b = 2 (‖f‖²_c - |f(0)|² - c_1 |f'(0)|²)^{1/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FmrNorm<T> {
    pub lhs_sq: T,
    pub rhs_sq: T,
}

impl<T: Scalar> FmrNorm<T> {
    pub fn lhs(&self) -> f64 {
        self.lhs_sq.to_f64().sqrt()
    }

    pub fn rhs(&self) -> f64 {
        self.rhs_sq.to_f64().sqrt()
    }

    pub fn exact(&self) -> bool {
        self.lhs_sq == self.rhs_sq
    }
}

/// `f(0) = a_0` and `f'(0) = a_1`; needs `c_0 = 1`.
pub fn fmr_norm_identity<T: Scalar>(f: &SliceSeries<T>) -> Result<FmrNorm<T>> {
    let c = f.weight();
    if !c.value(0).is_one() {
        return Err(Error::Domain(format!("weight {c} has c_0 != 1")));
    }
    let lhs_sq = tau_series(f).norm_sqr();
    let c1 = T::from_rational(&c.value(1));
    let inner = f.norm_sqr() - f.coeff(0).norm_sqr() - c1 * f.coeff(1).norm_sqr();
    Ok(FmrNorm {
        lhs_sq,
        rhs_sq: T::from_i64(4) * inner,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    /// `S_n = Σ_{k<=n} |q|^{2k} / b_k`.
    pub partial_sums: Vec<f64>,
    /// Term ratios `t_{k+1} / t_k`.
    pub ratios: Vec<f64>,
    /// Extrapolated limit of the ratios.
    pub limit: f64,
    /// Bound on `Σ_{k>n} |q|^{2k} / b_k`.
    pub tail: f64,
    /// `limit <= |q|²` within `1e-6`.
    pub converges: bool,
}

/// Ratio-test data for `Σ (k+1)²(k+2)² |q|^{2k} / c_{k+2}`, the squared
/// pointwise bound in the transported space.
pub fn fmr_convergence_check(c: &WeightSequence, r: f64, n: usize) -> Result<ConvergenceReport> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::OutOfDomain(format!("|q| = {r} not in [0, 1)")));
    }
    let b = b_from_c(c);
    let x = r * r;
    let mut partial_sums = Vec::with_capacity(n + 1);
    let mut ratios = Vec::with_capacity(n);
    let mut term = 1.0 / b.value_f64(0);
    let mut sum = term;
    partial_sums.push(sum);
    for k in 0..n {
        let ratio = x * b.decay_ratio(k);
        ratios.push(ratio);
        term *= ratio;
        sum += term;
        partial_sums.push(sum);
    }
    let limit = if n >= 8 {
        let (r1, r2, r4) = (ratios[n / 4 - 1], ratios[n / 2 - 1], ratios[n - 1]);
        (8.0 * r4 - 6.0 * r2 + r1) / 3.0
    } else {
        ratios.last().copied().unwrap_or(0.0)
    };
    Ok(ConvergenceReport {
        partial_sums,
        ratios,
        limit,
        tail: b.tail_sum(x, n),
        converges: limit <= x + 1e-6,
    })
}

/// One row of the table of transported weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FmrRow {
    pub space: String,
    pub c_formula: String,
    pub b_formula: String,
    /// Coefficient of `|f(0)|²` in the norm formula.
    pub deficit_f0: String,
    /// Coefficient of `|f'(0)|²`, i.e. `c_1`.
    pub deficit_f1: String,
    /// Largest `k` at which the closed form of `b_k` was compared.
    pub checked_up_to: usize,
    /// Closed form matches the transported weight exactly at every `k`.
    pub exact: bool,
    pub note: Option<String>,
}

/// Indices compared in [`transport_table`].
pub const TABLE_KMAX: usize = 32;

/// Closed forms for the four named spaces, written out independently of
/// the transport formula.
fn b_closed_form(name: &str, k: usize) -> Rational {
    let k1 = int(k as i64 + 1);
    let k2 = int(k as i64 + 2);
    let k3 = int(k as i64 + 3);
    match name {
        "hardy" => Rational::one() / (&k1 * &k1 * &k2 * &k2),
        "fock" => Rational::from_integer(factorial(k as u64)) / (&k1 * &k2),
        "dirichlet" => Rational::one() / (&k1 * &k1 * &k2),
        "bergman" => Rational::one() / (&k3 * &k1 * &k1 * &k2 * &k2),
        _ => unreachable!("named weights only"),
    }
}

pub fn transport_table() -> Vec<FmrRow> {
    let rows = [
        ("Hardy", "1", "1/((k+1)^2 (k+2)^2)"),
        ("Fock", "k!", "k!/((k+1)(k+2))"),
        ("Dirichlet", "k", "1/((k+1)^2 (k+2))"),
        ("Bergman", "1/(k+1)", "1/((k+3)(k+1)^2 (k+2)^2)"),
    ];
    rows.iter()
        .map(|&(space, cf, bf)| {
            let c = WeightSequence::named(&space.to_lowercase()).expect("named weight");
            let b = b_from_c(&c);
            let exact = (0..=TABLE_KMAX).all(|k| b.value(k) == b_closed_form(c.name(), k));
            FmrRow {
                space: space.to_string(),
                c_formula: cf.to_string(),
                b_formula: bf.to_string(),
                deficit_f0: format_rational(&c.value(0)),
                deficit_f1: format_rational(&c.value(1)),
                checked_up_to: TABLE_KMAX,
                exact,
                note: c.override_note().map(|s| format!("weight override: {s}")),
            }
        })
        .collect()
}

fn norm_formula(row: &FmrRow) -> String {
    let f1 = if row.deficit_f1 == "1" {
        String::new()
    } else {
        format!("({}) ", row.deficit_f1)
    };
    format!("2 sqrt(||f||^2 - |f(0)|^2 - {f1}|f'(0)|^2)")
}

pub fn transport_table_markdown(rows: &[FmrRow]) -> String {
    let mut out =
        String::from("| HS_c | c_k | b_k | norm of tau(f) | exact |\n|---|---|---|---|---|\n");
    for r in rows {
        let space = match &r.note {
            Some(n) => format!("{} ({n})", r.space),
            None => r.space.clone(),
        };
        out.push_str(&format!(
            "| {space} | {} | {} | {} | {} |\n",
            r.c_formula,
            r.b_formula,
            norm_formula(r).replace('|', "\\|"),
            if r.exact { "yes" } else { "no" }
        ));
    }
    out
}

pub fn transport_table_csv(rows: &[FmrRow]) -> String {
    let mut out = String::from("space,c_k,b_k,deficit_f0,deficit_f1,exact,note\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.space,
            r.c_formula,
            r.b_formula,
            r.deficit_f0,
            r.deficit_f1,
            r.exact,
            r.note.clone().unwrap_or_default()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64, b: i64) -> crate::quat::QuaternionExact {
        crate::quat::QuaternionExact::from_ints(a, b, 0, -a)
    }

    fn monomial(k: usize, c: WeightSequence) -> SliceSeries<Rational> {
        SliceSeries::unit(k, c)
    }

    #[test]
    fn tau_examples() {
        let fock = WeightSequence::fock();
        let t = tau_series_checked(&monomial(2, fock.clone())).unwrap();
        assert_eq!(t.coeffs(), &[Quaternion::from_real(int(-4))]);
        let t = tau_series_checked(&monomial(4, fock.clone())).unwrap();
        assert_eq!(t.coeff(2), Quaternion::from_real(int(-24)));
        assert!(t.coeff(0).is_zero() && t.coeff(1).is_zero());
        let low = SliceSeries::new(vec![q(1, 2), q(0, 3)], fock);
        assert!(tau_series_checked(&low).unwrap().is_zero());
    }

    #[test]
    fn commuting_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [0, 1, 2, 5, 9] {
            let f = SliceSeries::random_exact(&mut rng, n, WeightSequence::hardy(), 4);
            assert_eq!(tau_series(&f), tau_series_symbolic(&f).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn transported_weights() {
        let b = b_from_c(&WeightSequence::hardy());
        assert_eq!(b.value(0), rat(1, 4));
        assert_eq!(b.value(2), rat(1, 144));
        let b = b_from_c(&WeightSequence::fock());
        assert_eq!(b.value(0), rat(1, 2));
        assert_eq!(b.value(2), rat(1, 6));
        let b = b_from_c(&WeightSequence::bergman());
        assert_eq!(b.value(1), rat(1, 4 * 4 * 9));
        assert!(!b.non_decreasing());
    }

    #[test]
    fn norm_identity_examples() {
        let f = monomial(2, WeightSequence::fock());
        let id = fmr_norm_identity(&f).unwrap();
        assert_eq!(id.lhs_sq, int(8));
        assert!(id.exact());
        assert!((id.lhs() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let low = SliceSeries::new(vec![q(3, 1), q(-2, 5)], WeightSequence::bergman());
        let id = fmr_norm_identity(&low).unwrap();
        assert!(id.lhs_sq.is_zero() && id.rhs_sq.is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for c in WeightSequence::named_weights() {
            let mut g = SliceSeries::random_exact(&mut rng, 10, c.clone(), 6);
            let mut coeffs = g.coeffs().to_vec();
            coeffs[0] = Quaternion::zero();
            coeffs[1] = Quaternion::zero();
            g = SliceSeries::new(coeffs, c);
            let id = fmr_norm_identity(&g).unwrap();
            assert_eq!(id.lhs_sq, g.norm_sqr() * int(4));
        }
    }

    #[test]
    fn convergence() {
        let r = fmr_convergence_check(&WeightSequence::hardy(), 0.5, 200).unwrap();
        assert!((r.limit - 0.25).abs() < 1e-6 && r.converges);
        let r = fmr_convergence_check(&WeightSequence::hardy(), 0.0, 200).unwrap();
        assert_eq!(*r.partial_sums.last().unwrap(), 4.0);
        let r = fmr_convergence_check(&WeightSequence::bergman(), 0.9, 200).unwrap();
        let s = r.partial_sums.len();
        assert!(r.converges);
        let earlier_tail = b_from_c(&WeightSequence::bergman()).tail_sum(0.81, 190);
        assert!(r.partial_sums[s - 1] - r.partial_sums[s - 11] <= earlier_tail);
        assert!(r.tail < earlier_tail);
        assert!(fmr_convergence_check(&WeightSequence::hardy(), 1.0, 10).is_err());
    }

    #[test]
    fn table() {
        let rows = transport_table();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.exact));
        assert_eq!(rows[3].deficit_f1, "1/2");
        assert!(rows[..3].iter().all(|r| r.deficit_f1 == "1"));
        assert!(rows[2].note.is_some());
        assert!(transport_table_markdown(&rows).contains("(1/2) \\|f'(0)\\|^2"));
        assert_eq!(transport_table_csv(&rows).lines().count(), 5);
    }

    #[test]
    fn preimage_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b = b_from_c(&WeightSequence::fock());
        let alpha = AppellSeries::random_exact(&mut rng, 12, b, 5);
        let g = tau_preimage(&alpha, &WeightSequence::fock());
        assert_eq!(g.truncation(), 14);
        assert_eq!(tau_series(&g), alpha);
    }
}
