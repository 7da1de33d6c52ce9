//! Operational calculus for the Fourier transform on GL(2,R).
//!
//! Polynomial differential operators on the group ([`GroupOperator`]) map
//! under [`theta`] to differential-difference operators in `(t, s)` with
//! coefficients rational in `(μ1, μ2)` ([`FourierOperator`]), so that
//! `K_{DF} = Θ(D) K_F` for the integral kernel of the transform. The crate
//! provides exact arithmetic in both algebras, the map itself, symbolic
//! test functions, quadrature for the kernel, a one-dimensional model on
//! the plane, and the verification suites.

pub mod coeffs;
pub mod fourier;
pub mod group;
pub mod parse;
pub mod quad;
pub mod symfunc;
pub mod theta;
pub mod toy;
pub mod verify;

pub use coeffs::{ParamPoly, PoleError, Rational, RationalFunction};
pub use fourier::{FourierMonomial, FourierOperator, ParamPoint};
pub use group::{Coord, CoordPoly, GroupOperator, LocalizedCoeff};
pub use parse::{parse_operator, ParseError};
pub use quad::{KernelEvaluator, KernelPoint, QuadratureSpec};
pub use symfunc::{SupportBox, SymExpr, Var};
pub use theta::{theta, Generator, Theta};
pub use verify::{Config, Settings, Suite, VerificationCase, VerificationReport};
