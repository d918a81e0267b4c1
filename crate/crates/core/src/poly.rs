//! Polynomials in the real variables `x0..x3` with quaternion coefficients.
//!
//! Coefficients sit to the left of the monomial. Since the variables are
//! real they are central, so evaluation substitutes the components of the
//! point and multiplies the coefficient by a real number.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{Quaternion, QuaternionExact};
use crate::scalar::{int, Rational, Scalar};

pub const DEFAULT_DEGREE_CAP: u32 = 24;

pub type Exponents = [u32; 4];

#[derive(Clone, Debug, PartialEq, Default)]
pub struct QPoly {
    terms: BTreeMap<Exponents, QuaternionExact>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(QuaternionExact::one())
    }

    pub fn constant(c: QuaternionExact) -> Self {
        Self::monomial(c, [0; 4])
    }

    pub fn monomial(c: QuaternionExact, e: Exponents) -> Self {
        let mut p = QPoly::zero();
        p.add_term(e, c);
        p
    }

    /// The real variable `x_l`.
    pub fn var(l: usize) -> Self {
        let mut e = [0; 4];
        e[l] = 1;
        Self::monomial(QuaternionExact::one(), e)
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, QuaternionExact)>>(it: I) -> Self {
        let mut p = QPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: QuaternionExact) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &QuaternionExact)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponents) -> QuaternionExact {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(QuaternionExact::zero)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    /// Product with the coefficients of `self` on the left.
    pub fn checked_mul(&self, other: &QPoly) -> Result<QPoly> {
        self.mul_capped(other, DEFAULT_DEGREE_CAP)
    }

    pub fn mul_capped(&self, other: &QPoly, cap: u32) -> Result<QPoly> {
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            if a + b > cap {
                return Err(Error::DegreeCapExceeded { degree: a + b, cap });
            }
        }
        let mut out = QPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow_capped(&self, n: u32, cap: u32) -> Result<QPoly> {
        if let Some(d) = self.degree() {
            if d * n > cap {
                return Err(Error::DegreeCapExceeded { degree: d * n, cap });
            }
        }
        let mut acc = QPoly::one();
        for _ in 0..n {
            acc = acc.mul_capped(self, cap)?;
        }
        Ok(acc)
    }

    /// `c · f`, multiplying every coefficient on the left.
    pub fn left_mul(&self, c: &QuaternionExact) -> QPoly {
        QPoly::from_terms(self.terms.iter().map(|(e, a)| (*e, c * a)))
    }

    /// Every coefficient multiplied on the right by `c`; the polynomial
    /// form of `q ↦ f(q) c`.
    pub fn right_mul(&self, c: &QuaternionExact) -> QPoly {
        QPoly::from_terms(self.terms.iter().map(|(e, a)| (*e, a * c)))
    }

    pub fn scale(&self, r: &Rational) -> QPoly {
        QPoly::from_terms(self.terms.iter().map(|(e, a)| (*e, a.scale(r))))
    }

    pub fn partial(&self, l: usize) -> QPoly {
        QPoly::from_terms(self.terms.iter().filter(|(e, _)| e[l] > 0).map(|(e, a)| {
            let mut d = *e;
            d[l] -= 1;
            (d, a.scale(&int(e[l] as i64)))
        }))
    }

    /// `Σ_l e_l ∂_l f` over l = 1..3, units acting from the left.
    pub fn vector_derivative(&self) -> QPoly {
        (1..4).fold(QPoly::zero(), |acc, l| {
            acc.add(&self.partial(l).left_mul(&QuaternionExact::unit(l)))
        })
    }

    pub fn depends_on_x0(&self) -> bool {
        self.terms.keys().any(|e| e[0] > 0)
    }

    /// Drops every monomial containing `x0`, i.e. restricts to `x0 = 0`.
    pub fn restrict_x0(&self) -> QPoly {
        QPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[0] == 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Sets `x2 = x3 = 0`, leaving a polynomial in `x0, x1`.
    pub fn restrict_to_x0_x1(&self) -> QPoly {
        QPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[2] == 0 && e[3] == 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Coefficients of `f(t)` for real `t`, lowest degree first.
    pub fn slice_taylor_real(&self) -> Vec<QuaternionExact> {
        let mut out: Vec<QuaternionExact> = Vec::new();
        for (e, c) in &self.terms {
            if e[1] == 0 && e[2] == 0 && e[3] == 0 {
                let k = e[0] as usize;
                if out.len() <= k {
                    out.resize(k + 1, QuaternionExact::zero());
                }
                out[k] += c;
            }
        }
        out
    }

    pub fn eval<T: Scalar>(&self, q: &Quaternion<T>) -> Quaternion<T> {
        let xs = [&q.x0, &q.x1, &q.x2, &q.x3];
        let mut acc = Quaternion::<T>::zero();
        for (e, c) in &self.terms {
            let mut m = T::one();
            for (x, &n) in xs.iter().zip(e.iter()) {
                for _ in 0..n {
                    m = m * (*x).clone();
                }
            }
            acc += Quaternion::<T>::from_rational(c).scale(&m);
        }
        acc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("polynomial serialises")
    }

    pub fn from_json(s: &str) -> Result<QPoly> {
        let records: Vec<TermRecord> =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(QPoly::from_terms(
            records.into_iter().map(|r| (r.exponents, r.coeff)),
        ))
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(e, c)| TermRecord {
                exponents: *e,
                coeff: c.clone(),
            })
            .collect()
    }
}

/// One monomial in the JSON golden-file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    #[serde(rename = "monomial-exponents")]
    pub exponents: Exponents,
    pub coeff: QuaternionExact,
}

/// `q = x0 + x1 i + x2 j + x3 k`.
pub fn embed_q() -> QPoly {
    (0..4).fold(QPoly::zero(), |acc, l| {
        acc.add(&QPoly::var(l).left_mul(&QuaternionExact::unit(l)))
    })
}

/// `q̄ = x0 - x1 i - x2 j - x3 k`.
pub fn embed_qbar() -> QPoly {
    QPoly::var(0).sub(&vector_q())
}

/// The vector part `x1 i + x2 j + x3 k`.
pub fn vector_q() -> QPoly {
    (1..4).fold(QPoly::zero(), |acc, l| {
        acc.add(&QPoly::var(l).left_mul(&QuaternionExact::unit(l)))
    })
}

/// Left Cauchy-Fueter operator `∂0 + i∂1 + j∂2 + k∂3`.
pub fn fueter_operator(f: &QPoly) -> QPoly {
    f.partial(0).add(&f.vector_derivative())
}

/// Hypercomplex derivative `(∂0 - i∂1 - j∂2 - k∂3)/2`.
pub fn hyper_derivative(f: &QPoly) -> QPoly {
    f.partial(0)
        .sub(&f.vector_derivative())
        .scale(&Rational::new(1.into(), 2.into()))
}

pub fn laplacian4(f: &QPoly) -> QPoly {
    (0..4).fold(QPoly::zero(), |acc, l| acc.add(&f.partial(l).partial(l)))
}

pub fn is_fueter_regular(f: &QPoly) -> bool {
    fueter_operator(f).is_zero()
}

/// Cauchy-Kowalevskaya extension `exp(-x0 D) h` of x0-free data `h`,
/// where `D = i∂1 + j∂2 + k∂3`. The series terminates because each
/// application of `D` lowers the degree.
pub fn ck_extension(h: &QPoly) -> Result<QPoly> {
    if h.depends_on_x0() {
        return Err(Error::NonRestrictedInput);
    }
    let mut out = QPoly::zero();
    let mut term = h.clone();
    let mut j: i64 = 0;
    // (-x0)^j / j!
    let mut factor = QPoly::one();
    while !term.is_zero() {
        out = out.add(&factor.checked_mul(&term)?);
        j += 1;
        term = term.vector_derivative();
        factor = factor
            .checked_mul(&QPoly::var(0))?
            .scale(&Rational::new((-1).into(), j.into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::QuaternionFloat;
    use crate::scalar::rat;

    fn qc(a: i64, b: i64, c: i64, d: i64) -> QuaternionExact {
        QuaternionExact::from_ints(a, b, c, d)
    }

    #[test]
    fn ring_operations() {
        let zeta = QPoly::var(1).sub(&QPoly::var(0).left_mul(&qc(0, 1, 0, 0)));
        assert_eq!(zeta.checked_mul(&QPoly::one()).unwrap(), zeta);
        let a = QPoly::var(1).left_mul(&qc(0, 1, 0, 0));
        let b = QPoly::var(1).left_mul(&qc(0, 0, 1, 0));
        assert_eq!(
            a.checked_mul(&b).unwrap(),
            QPoly::monomial(qc(0, 0, 0, 1), [0, 2, 0, 0])
        );
        let sq = embed_q().checked_mul(&embed_q()).unwrap();
        let p = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        assert!(sq.eval(&p).dist(&Quaternion::new(0.0, 2.0, 0.0, 0.0)) < 1e-15);
    }

    #[test]
    fn embeddings() {
        let t = QuaternionFloat::from_real(2.5);
        assert_eq!(embed_q().eval(&t), t);
        assert_eq!(embed_qbar().eval(&QuaternionExact::i()), qc(0, -1, 0, 0));
        assert_eq!(embed_q().add(&embed_qbar()), QPoly::var(0).scale(&int(2)));
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let p = QPoly::var(2).sub(&QPoly::var(2));
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
        assert_eq!(p, QPoly::zero());
    }

    #[test]
    fn differential_operators() {
        assert!(fueter_operator(&QPoly::constant(qc(3, 1, 0, 2))).is_zero());
        let zeta1 = QPoly::var(1).sub(&QPoly::var(0).left_mul(&qc(0, 1, 0, 0)));
        assert!(fueter_operator(&zeta1).is_zero());
        assert_eq!(
            fueter_operator(&embed_q()),
            QPoly::constant(qc(-2, 0, 0, 0))
        );
        assert!(hyper_derivative(&QPoly::constant(qc(1, 2, 3, 4))).is_zero());
        assert_eq!(
            laplacian4(&QPoly::var(0).checked_mul(&QPoly::var(0)).unwrap()),
            QPoly::constant(qc(2, 0, 0, 0))
        );
        let q2 = embed_q().checked_mul(&embed_q()).unwrap();
        assert_eq!(laplacian4(&q2), QPoly::constant(qc(-4, 0, 0, 0)));
    }

    #[test]
    fn ck_extension_of_vector_part() {
        assert_eq!(ck_extension(&QPoly::one()).unwrap(), QPoly::one());
        let v = vector_q();
        let ext = ck_extension(&v).unwrap();
        assert_eq!(ext, v.add(&QPoly::var(0).scale(&int(3))));
        assert!(fueter_operator(&ext).is_zero());
        assert_eq!(ext.restrict_x0(), v);
        assert_eq!(ck_extension(&QPoly::var(0)), Err(Error::NonRestrictedInput));
    }

    #[test]
    fn degree_cap_fails_fast() {
        let q = embed_q();
        assert!(matches!(
            q.pow_capped(25, DEFAULT_DEGREE_CAP),
            Err(Error::DegreeCapExceeded {
                degree: 25,
                cap: 24
            })
        ));
        assert!(q.pow_capped(3, 2).is_err());
        assert!(q.pow_capped(2, 2).is_ok());
    }

    #[test]
    fn json_format() {
        let p = QPoly::monomial(
            Quaternion::new(rat(1, 3), int(0), int(-2), int(0)),
            [1, 0, 2, 0],
        );
        let s = p.to_json();
        assert_eq!(
            s,
            r#"[{"monomial-exponents":[1,0,2,0],"coeff":["1/3","0","-2","0"]}]"#
        );
        assert_eq!(QPoly::from_json(&s).unwrap(), p);
    }

    #[test]
    fn real_axis_coefficients() {
        let p = embed_q().pow_capped(3, 24).unwrap();
        let c = p.slice_taylor_real();
        assert_eq!(
            c,
            vec![
                qc(0, 0, 0, 0),
                qc(0, 0, 0, 0),
                qc(0, 0, 0, 0),
                qc(1, 0, 0, 0)
            ]
        );
    }
}
