//! Clifford-Appell polynomials on the quaternions, the weighted spaces they
//! span, shift and backward shift operators, Segal-Bargmann type
//! transforms and the Fueter mapping range.

pub mod appell;
pub mod error;
pub mod fueter_map;
pub mod operators;
pub mod poly;
pub mod quadrature;
pub mod quat;
pub mod scalar;
pub mod spaces;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use poly::QPoly;
pub use quat::{ImaginaryUnit, Quaternion, QuaternionExact, QuaternionFloat};
pub use scalar::{Rational, Scalar};
