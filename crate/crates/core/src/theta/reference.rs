//! Reference Fourier-side operators, written out term by term. Nothing here
//! is produced by [`super::theta`]; these tables are the fixed targets the
//! correspondence is checked against.

use crate::coeffs::{rat, RationalFunction};
use crate::fourier::{FourierMonomial, FourierOperator};

fn m1() -> RationalFunction {
    RationalFunction::mu1()
}

fn m2() -> RationalFunction {
    RationalFunction::mu2()
}

fn q(n: i64, d: i64) -> RationalFunction {
    RationalFunction::from_rational(rat(n, d))
}

/// `μ1 - μ2 + m`.
fn x(m: i64) -> RationalFunction {
    &(&m1() - &m2()) + &RationalFunction::from_int(m)
}

fn term(c: RationalFunction, i: u32, j: u32, p: u32, q: u32, k: i32, l: i32) -> FourierOperator {
    FourierOperator::monomial(c, FourierMonomial::new(i, j, p, q, k, l))
}

fn sum<I: IntoIterator<Item = FourierOperator>>(terms: I) -> FourierOperator {
    terms.into_iter().fold(FourierOperator::zero(), |a, b| a + b)
}

/// Images of the right-invariant fields, `[i-1][j-1]`.
pub fn e_right() -> [[FourierOperator; 2]; 2] {
    [
        [
            // -t ∂t - (1/2 - μ1)
            sum([
                term(q(-1, 1), 1, 0, 1, 0, 0, 0),
                term(&m1() - &q(1, 2), 0, 0, 0, 0, 0, 0),
            ]),
            // ∂t
            term(q(1, 1), 0, 0, 1, 0, 0, 0),
        ],
        [
            // -t² ∂t + (-1 + μ1 - μ2) t
            sum([term(q(-1, 1), 2, 0, 1, 0, 0, 0), term(x(-1), 1, 0, 0, 0, 0, 0)]),
            // t ∂t + (1/2 + μ2)
            sum([
                term(q(1, 1), 1, 0, 1, 0, 0, 0),
                term(&m2() + &q(1, 2), 0, 0, 0, 0, 0, 0),
            ]),
        ],
    ]
}

/// Images of the left-invariant fields, `[i-1][j-1]`.
pub fn e_left() -> [[FourierOperator; 2]; 2] {
    [
        [
            // -s ∂s - (1/2 + μ1)
            sum([
                term(q(-1, 1), 0, 1, 0, 1, 0, 0),
                term(-(&m1() + &q(1, 2)), 0, 0, 0, 0, 0, 0),
            ]),
            // ∂s
            term(q(1, 1), 0, 0, 0, 1, 0, 0),
        ],
        [
            // -s² ∂s + (-1 - μ1 + μ2) s
            sum([term(q(-1, 1), 0, 2, 0, 1, 0, 0), term(-x(1), 0, 1, 0, 0, 0, 0)]),
            // s ∂s + (1/2 - μ2)
            sum([
                term(q(1, 1), 0, 1, 0, 1, 0, 0),
                term(&q(1, 2) - &m2(), 0, 0, 0, 0, 0, 0),
            ]),
        ],
    ]
}

/// Image of `a∂a + b∂b + c∂c + d∂d`: the scalar `-μ1 - μ2`.
pub fn euler_image() -> FourierOperator {
    FourierOperator::scalar(-(&m1() + &m2()))
}

/// Image of `wa wd - wb wc`: `(μ1 - 1/2)(μ2 - 1/2) V1^-1 V2^-1`.
pub fn weighted_invariant_image() -> FourierOperator {
    term(&(&m1() - &q(1, 2)) * &(&m2() - &q(1, 2)), 0, 0, 0, 0, -1, -1)
}

/// Image of `c²`.
pub fn c_squared() -> FourierOperator {
    let one = RationalFunction::one();
    sum([
        term(&one / &(&x(0) * &x(1)), 0, 0, 2, 0, 2, 0),
        term(&q(2, 1) / &(&x(-1) * &x(1)), 0, 0, 1, 1, 1, 1),
        term(&one / &(&x(0) * &x(-1)), 0, 0, 0, 2, 0, 2),
    ])
}

/// Image of `c wb`.
pub fn c_wb() -> FourierOperator {
    sum([
        term(&(&m2() - &q(1, 2)) / &(&x(1) * &x(0)), 0, 0, 2, 0, 1, -1),
        term(&(&m1() + &m2()) / &(&x(1) * &x(-1)), 0, 0, 1, 1, 0, 0),
        term(&(&m1() - &q(1, 2)) / &(&x(0) * &x(-1)), 0, 0, 0, 2, -1, 1),
    ])
}

/// Reference image of `wb²` as stated, with `V2^-1` on the first term and
/// `∂t²` on the last.
pub fn wb_squared_stated() -> FourierOperator {
    let a = &(&m2() - &q(3, 2)) * &(&m2() - &q(1, 2));
    let b = &(&q(2, 1) * &(&m2() - &q(1, 2))) * &(&m1() - &q(1, 2));
    let c = &(&m1() - &q(3, 2)) * &(&m1() - &q(1, 2));
    sum([
        term(&a / &(&x(1) * &x(0)), 0, 0, 2, 0, 0, -1),
        term(&b / &(&x(1) * &x(-1)), 0, 0, 1, 1, -1, -1),
        term(&c / &(&x(0) * &x(-1)), 0, 0, 2, 0, -2, 0),
    ])
}

/// The stated `wb²` image with the first shift read as `V2^-2` and the
/// last derivative read as `∂s²`, matching the `t ↔ s`, `V1 ↔ V2` symmetry
/// of the other two reference images.
pub fn wb_squared_symmetric() -> FourierOperator {
    let a = &(&m2() - &q(3, 2)) * &(&m2() - &q(1, 2));
    let b = &(&q(2, 1) * &(&m2() - &q(1, 2))) * &(&m1() - &q(1, 2));
    let c = &(&m1() - &q(3, 2)) * &(&m1() - &q(1, 2));
    sum([
        term(&a / &(&x(1) * &x(0)), 0, 0, 2, 0, 0, -2),
        term(&b / &(&x(1) * &x(-1)), 0, 0, 1, 1, -1, -1),
        term(&c / &(&x(0) * &x(-1)), 0, 0, 0, 2, -2, 0),
    ])
}
