//! Exact coefficient arithmetic: rationals, polynomials in the parameters
//! `μ1`, `μ2`, and the fraction field ℚ(μ1, μ2).

mod gcd;
mod poly;
mod ratfunc;

pub use gcd::gcd;
pub use poly::{Exponent, ParamPoly};
pub use ratfunc::{PoleError, RationalFunction, RationalSum, POLE_TOLERANCE};

pub(crate) use poly::{binomial, rat_to_f64};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
