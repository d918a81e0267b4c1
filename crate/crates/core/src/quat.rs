//! Quaternion arithmetic over exact rationals and binary64.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// `x0 + x1 i + x2 j + x3 k`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Quaternion<T> {
    pub x0: T,
    pub x1: T,
    pub x2: T,
    pub x3: T,
}

pub type QuaternionExact = Quaternion<Rational>;
pub type QuaternionFloat = Quaternion<f64>;

impl<T> Quaternion<T> {
    pub const fn new(x0: T, x1: T, x2: T, x3: T) -> Self {
        Quaternion { x0, x1, x2, x3 }
    }

    pub fn components(&self) -> [&T; 4] {
        [&self.x0, &self.x1, &self.x2, &self.x3]
    }
}

impl<T: Scalar> Quaternion<T> {
    pub fn zero() -> Self {
        Self::from_real(T::zero())
    }

    pub fn one() -> Self {
        Self::from_real(T::one())
    }

    pub fn from_real(x0: T) -> Self {
        Quaternion::new(x0, T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Quaternion::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Quaternion::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Quaternion::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// The imaginary unit `e_l` for `l` in 1..=3; `e_0 = 1`.
    pub fn unit(l: usize) -> Self {
        match l {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::j(),
            3 => Self::k(),
            _ => panic!("quaternion unit index {l} out of range"),
        }
    }

    pub fn from_array(c: [T; 4]) -> Self {
        let [x0, x1, x2, x3] = c;
        Quaternion::new(x0, x1, x2, x3)
    }

    pub fn get(&self, l: usize) -> &T {
        match l {
            0 => &self.x0,
            1 => &self.x1,
            2 => &self.x2,
            3 => &self.x3,
            _ => panic!("component index {l} out of range"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero() && self.x2.is_zero() && self.x3.is_zero()
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(
            self.x0.clone(),
            -self.x1.clone(),
            -self.x2.clone(),
            -self.x3.clone(),
        )
    }

    pub fn real(&self) -> T {
        self.x0.clone()
    }

    /// Vector part `x1 i + x2 j + x3 k`.
    pub fn vector(&self) -> Self {
        Quaternion::new(T::zero(), self.x1.clone(), self.x2.clone(), self.x3.clone())
    }

    /// `|q|^2 = x0^2 + x1^2 + x2^2 + x3^2`.
    pub fn norm_sqr(&self) -> T {
        self.x0.clone() * self.x0.clone()
            + self.x1.clone() * self.x1.clone()
            + self.x2.clone() * self.x2.clone()
            + self.x3.clone() * self.x3.clone()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().to_f64().sqrt()
    }

    pub fn scale(&self, s: &T) -> Self {
        Quaternion::new(
            self.x0.clone() * s.clone(),
            self.x1.clone() * s.clone(),
            self.x2.clone() * s.clone(),
            self.x3.clone() * s.clone(),
        )
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::Domain("inverse of the zero quaternion".into()));
        }
        let c = self.conj();
        Ok(Quaternion::new(
            c.x0 / n.clone(),
            c.x1 / n.clone(),
            c.x2 / n.clone(),
            c.x3 / n,
        ))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_float(&self) -> QuaternionFloat {
        Quaternion::new(
            self.x0.to_f64(),
            self.x1.to_f64(),
            self.x2.to_f64(),
            self.x3.to_f64(),
        )
    }

    pub fn from_rational(q: &QuaternionExact) -> Self {
        Quaternion::new(
            T::from_rational(&q.x0),
            T::from_rational(&q.x1),
            T::from_rational(&q.x2),
            T::from_rational(&q.x3),
        )
    }
}

impl QuaternionFloat {
    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    /// `e^{x0} (cos|v| + v/|v| sin|v|)`.
    pub fn exp(&self) -> Self {
        let v = self.vector();
        let r = v.norm();
        let e = self.x0.exp();
        if r < 1e-300 {
            return Quaternion::from_real(e);
        }
        let s = e * r.sin() / r;
        Quaternion::new(e * r.cos(), v.x1 * s, v.x2 * s, v.x3 * s)
    }
}

/// Free-function form of [`QuaternionFloat::exp`].
pub fn qexp(q: &QuaternionFloat) -> QuaternionFloat {
    q.exp()
}

impl QuaternionExact {
    pub fn from_ints(x0: i64, x1: i64, x2: i64, x3: i64) -> Self {
        Quaternion::new(
            Rational::from_i64(x0),
            Rational::from_i64(x1),
            Rational::from_i64(x2),
            Rational::from_i64(x3),
        )
    }

    pub fn to_strings(&self) -> [String; 4] {
        [
            format_rational(&self.x0),
            format_rational(&self.x1),
            format_rational(&self.x2),
            format_rational(&self.x3),
        ]
    }

    pub fn parse_strings<S: AsRef<str>>(parts: &[S; 4]) -> Result<Self> {
        Ok(Quaternion::new(
            parse_rational(parts[0].as_ref())?,
            parse_rational(parts[1].as_ref())?,
            parse_rational(parts[2].as_ref())?,
            parse_rational(parts[3].as_ref())?,
        ))
    }
}

impl<'a, T: Scalar> Add<&'a Quaternion<T>> for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, o: &Quaternion<T>) -> Quaternion<T> {
        Quaternion::new(
            self.x0.clone() + o.x0.clone(),
            self.x1.clone() + o.x1.clone(),
            self.x2.clone() + o.x2.clone(),
            self.x3.clone() + o.x3.clone(),
        )
    }
}

impl<'a, T: Scalar> Sub<&'a Quaternion<T>> for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, o: &Quaternion<T>) -> Quaternion<T> {
        Quaternion::new(
            self.x0.clone() - o.x0.clone(),
            self.x1.clone() - o.x1.clone(),
            self.x2.clone() - o.x2.clone(),
            self.x3.clone() - o.x3.clone(),
        )
    }
}

/// Hamilton product.
impl<'a, T: Scalar> Mul<&'a Quaternion<T>> for &'a Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, o: &Quaternion<T>) -> Quaternion<T> {
        let (a0, a1, a2, a3) = (&self.x0, &self.x1, &self.x2, &self.x3);
        let (b0, b1, b2, b3) = (&o.x0, &o.x1, &o.x2, &o.x3);
        let m = |x: &T, y: &T| x.clone() * y.clone();
        Quaternion::new(
            m(a0, b0) - m(a1, b1) - m(a2, b2) - m(a3, b3),
            m(a0, b1) + m(a1, b0) + m(a2, b3) - m(a3, b2),
            m(a0, b2) - m(a1, b3) + m(a2, b0) + m(a3, b1),
            m(a0, b3) + m(a1, b2) - m(a2, b1) + m(a3, b0),
        )
    }
}

impl<T: Scalar> Neg for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Quaternion<T> {
        Quaternion::new(
            -self.x0.clone(),
            -self.x1.clone(),
            -self.x2.clone(),
            -self.x3.clone(),
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr<Quaternion<T>> for Quaternion<T> {
            type Output = Quaternion<T>;
            fn $m(self, o: Quaternion<T>) -> Quaternion<T> {
                (&self).$m(&o)
            }
        }
        impl<'a, T: Scalar> $tr<&'a Quaternion<T>> for Quaternion<T> {
            type Output = Quaternion<T>;
            fn $m(self, o: &Quaternion<T>) -> Quaternion<T> {
                (&self).$m(o)
            }
        }
        impl<'a, T: Scalar> $tr<Quaternion<T>> for &'a Quaternion<T> {
            type Output = Quaternion<T>;
            fn $m(self, o: Quaternion<T>) -> Quaternion<T> {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Quaternion<T> {
        -&self
    }
}

impl<T: Scalar> AddAssign<&Quaternion<T>> for Quaternion<T> {
    fn add_assign(&mut self, o: &Quaternion<T>) {
        *self = &*self + o;
    }
}

impl<T: Scalar> AddAssign<Quaternion<T>> for Quaternion<T> {
    fn add_assign(&mut self, o: Quaternion<T>) {
        *self = &*self + &o;
    }
}

impl<T: Scalar> SubAssign<&Quaternion<T>> for Quaternion<T> {
    fn sub_assign(&mut self, o: &Quaternion<T>) {
        *self = &*self - o;
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}i + {}j + {}k",
            self.x0, self.x1, self.x2, self.x3
        )
    }
}

impl Serialize for QuaternionFloat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuaternionFloat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c, e] = <[f64; 4]>::deserialize(d)?;
        Ok(Quaternion::new(a, b, c, e))
    }
}

impl Serialize for QuaternionExact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuaternionExact {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = <[String; 4]>::deserialize(d)?;
        QuaternionExact::parse_strings(&parts).map_err(serde::de::Error::custom)
    }
}

/// A unit pure quaternion `ω`, so that `ω² = -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImaginaryUnit(QuaternionFloat);

impl ImaginaryUnit {
    pub fn new(q: QuaternionFloat) -> Result<Self> {
        let v = q.vector();
        let n = v.norm();
        if q.x0.abs() > 1e-12 || (n - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "not a unit pure quaternion: {:?}",
                q.to_array()
            )));
        }
        Ok(ImaginaryUnit(v))
    }

    /// Normalises the vector part of `q`; fails when it vanishes.
    pub fn normalized(q: &QuaternionFloat) -> Result<Self> {
        let v = q.vector();
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::Domain("zero vector part has no direction".into()));
        }
        Ok(ImaginaryUnit(v.scale(&(1.0 / n))))
    }

    pub fn i() -> Self {
        ImaginaryUnit(Quaternion::i())
    }

    pub fn j() -> Self {
        ImaginaryUnit(Quaternion::j())
    }

    pub fn k() -> Self {
        ImaginaryUnit(Quaternion::k())
    }

    pub fn as_quaternion(&self) -> &QuaternionFloat {
        &self.0
    }

    /// `x + ω y`, a point of the slice `C_ω`.
    pub fn slice_point(&self, x: f64, y: f64) -> QuaternionFloat {
        let mut q = self.0.scale(&y);
        q.x0 = x;
        q
    }
}

/// Deterministic uniform sample on the sphere of imaginary units.
pub fn sample_sphere(seed: u64) -> ImaginaryUnit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_sphere_with(&mut rng)
}

pub fn sample_sphere_with<R: Rng + ?Sized>(rng: &mut R) -> ImaginaryUnit {
    // Archimedes: the height is uniform on [-1, 1].
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    let v = Quaternion::new(0.0, s * phi.cos(), s * phi.sin(), z);
    let n = v.norm();
    ImaginaryUnit(v.scale(&(1.0 / n)))
}
