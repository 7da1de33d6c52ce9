//! The Fourier-side algebra: differential–difference operators
//! `Σ Q_kl(t, s, ∂t, ∂s) V1^k V2^l` with coefficients in ℚ(μ1, μ2).
//!
//! Every element is stored in the normal order
//! `coeff · t^i s^j ∂t^p ∂s^q V1^k V2^l`. Products are normalised with
//! the rules
//!
//! * `∂t t = t ∂t + 1`, `∂s s = s ∂s + 1`,
//! * `V1^k V2^l f(μ1, μ2) = f(μ1 + k, μ2 + l) V1^k V2^l`,
//! * the shifts commute with `t, s, ∂t, ∂s`, and the `t`-side commutes with
//!   the `s`-side.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;

use crate::coeffs::{binomial, RationalFunction, RationalSum};

/// Exponent pattern `t^i s^j ∂t^p ∂s^q V1^k V2^l` of a normal-ordered
/// monomial.
///
/// Ordered lexicographically by `(k, l, i, j, p, q)`, which is also the
/// printing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct FourierMonomial {
    pub i: u32,
    pub j: u32,
    pub p: u32,
    pub q: u32,
    pub k: i32,
    pub l: i32,
}

impl FourierMonomial {
    pub const ONE: FourierMonomial = FourierMonomial {
        i: 0,
        j: 0,
        p: 0,
        q: 0,
        k: 0,
        l: 0,
    };

    pub fn new(i: u32, j: u32, p: u32, q: u32, k: i32, l: i32) -> Self {
        Self { i, j, p, q, k, l }
    }

    fn sort_key(&self) -> (i32, i32, u32, u32, u32, u32) {
        (self.k, self.l, self.i, self.j, self.p, self.q)
    }

    /// Total degree in `t, s`.
    pub fn coord_degree(&self) -> u32 {
        self.i + self.j
    }

    /// Total degree in `∂t, ∂s`.
    pub fn deriv_degree(&self) -> u32 {
        self.p + self.q
    }
}

impl Ord for FourierMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for FourierMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the Fourier-side operator algebra in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FourierOperator {
    terms: BTreeMap<FourierMonomial, RationalFunction>,
}

/// Representation parameters `(μ1, ε1; μ2, ε2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamPoint {
    pub m1: Complex64,
    pub eps1: u8,
    pub m2: Complex64,
    pub eps2: u8,
}

impl ParamPoint {
    pub fn new(m1: Complex64, eps1: u8, m2: Complex64, eps2: u8) -> Self {
        Self {
            m1,
            eps1: eps1 % 2,
            m2,
            eps2: eps2 % 2,
        }
    }

    /// The point reached by `V1^k V2^l`: `μ` moves by `(k, l)` and each
    /// parity flips with the parity of its shift.
    pub fn shifted(&self, k: i32, l: i32) -> Self {
        Self {
            m1: self.m1 + k as f64,
            eps1: (self.eps1 as i32 + k).rem_euclid(2) as u8,
            m2: self.m2 + l as f64,
            eps2: (self.eps2 as i32 + l).rem_euclid(2) as u8,
        }
    }
}

fn falling(n: u32, r: u32) -> BigInt {
    (0..r).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

impl FourierOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(RationalFunction::one())
    }

    pub fn scalar(c: RationalFunction) -> Self {
        Self::monomial(c, FourierMonomial::ONE)
    }

    pub fn monomial(c: RationalFunction, m: FourierMonomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    fn unit(m: FourierMonomial) -> Self {
        Self::monomial(RationalFunction::one(), m)
    }

    pub fn t() -> Self {
        Self::unit(FourierMonomial {
            i: 1,
            ..FourierMonomial::ONE
        })
    }

    pub fn s() -> Self {
        Self::unit(FourierMonomial {
            j: 1,
            ..FourierMonomial::ONE
        })
    }

    pub fn dt() -> Self {
        Self::unit(FourierMonomial {
            p: 1,
            ..FourierMonomial::ONE
        })
    }

    pub fn ds() -> Self {
        Self::unit(FourierMonomial {
            q: 1,
            ..FourierMonomial::ONE
        })
    }

    /// The shift `V1^k V2^l`.
    pub fn shift(k: i32, l: i32) -> Self {
        Self::unit(FourierMonomial {
            k,
            l,
            ..FourierMonomial::ONE
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FourierMonomial, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &FourierMonomial) -> Option<&RationalFunction> {
        self.terms.get(m)
    }

    fn add_term(&mut self, m: FourierMonomial, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let sum = &*v + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Applies `rf_shift(·, dk, dl)` to every coefficient, i.e. forms
    /// `V1^dk V2^dl · A · V1^-dk V2^-dl`.
    pub fn conjugate_by_shift(&self, dk: i32, dl: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.shift(dk as i64, dl as i64)))
                .collect(),
        }
    }

    /// Maximal `(t, s)`-degree over the monomials.
    pub fn coord_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.coord_degree()).max().unwrap_or(0)
    }

    /// Maximal `(∂t, ∂s)`-degree over the monomials.
    pub fn deriv_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.deriv_degree()).max().unwrap_or(0)
    }

    fn mul_monomials(
        out: &mut BTreeMap<FourierMonomial, RationalSum>,
        (m1, c1): (&FourierMonomial, &RationalFunction),
        (m2, c2): (&FourierMonomial, &RationalFunction),
    ) {
        let c = c1 * &c2.shift(m1.k as i64, m1.l as i64);
        if c.is_zero() {
            return;
        }
        let (num, den) = (c.num(), c.den());
        // ∂t^p t^i = Σ_r C(p, r) i!/(i-r)! t^(i-r) ∂t^(p-r), likewise for s
        for r in 0..=m1.p.min(m2.i) {
            let ft = binomial(m1.p, r) * falling(m2.i, r);
            for rr in 0..=m1.q.min(m2.j) {
                let fs = binomial(m1.q, rr) * falling(m2.j, rr);
                let key = FourierMonomial {
                    i: m1.i + m2.i - r,
                    j: m1.j + m2.j - rr,
                    p: m1.p + m2.p - r,
                    q: m1.q + m2.q - rr,
                    k: m1.k + m2.k,
                    l: m1.l + m2.l,
                };
                let factor = &ft * &fs;
                let acc = out.entry(key).or_default();
                if factor.is_one() {
                    acc.add_parts(num, den);
                } else {
                    acc.add_parts(&num.scale(&factor.into()), den);
                }
            }
        }
    }

    /// Evaluates every coefficient at a numeric parameter point.
    pub fn eval_coeffs(
        &self,
        m1: Complex64,
        m2: Complex64,
    ) -> Result<Vec<(FourierMonomial, Complex64)>, crate::coeffs::PoleError> {
        self.terms
            .iter()
            .map(|(m, c)| c.eval(m1, m2).map(|v| (*m, v)))
            .collect()
    }
}

impl Add for &FourierOperator {
    type Output = FourierOperator;
    fn add(self, rhs: &FourierOperator) -> FourierOperator {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &FourierOperator {
    type Output = FourierOperator;
    fn sub(self, rhs: &FourierOperator) -> FourierOperator {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Neg for &FourierOperator {
    type Output = FourierOperator;
    fn neg(self) -> FourierOperator {
        FourierOperator {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &FourierOperator {
    type Output = FourierOperator;
    fn mul(self, rhs: &FourierOperator) -> FourierOperator {
        let mut acc = BTreeMap::new();
        for a in &self.terms {
            for b in &rhs.terms {
                FourierOperator::mul_monomials(&mut acc, a, b);
            }
        }
        FourierOperator {
            terms: acc
                .into_iter()
                .map(|(m, c)| (m, c.finish()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FourierOperator {
            type Output = FourierOperator;
            fn $m(self, rhs: FourierOperator) -> FourierOperator {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for FourierOperator {
    type Output = FourierOperator;
    fn neg(self) -> FourierOperator {
        -&self
    }
}

impl From<RationalFunction> for FourierOperator {
    fn from(c: RationalFunction) -> Self {
        Self::scalar(c)
    }
}

fn push_power(out: &mut Vec<String>, name: &str, e: i64) {
    match e {
        0 => {}
        1 => out.push(name.to_string()),
        _ => out.push(format!("{name}^{e}")),
    }
}

impl fmt::Display for FourierMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        push_power(&mut parts, "t", self.i as i64);
        push_power(&mut parts, "s", self.j as i64);
        push_power(&mut parts, "∂t", self.p as i64);
        push_power(&mut parts, "∂s", self.q as i64);
        push_power(&mut parts, "V1", self.k as i64);
        push_power(&mut parts, "V2", self.l as i64);
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Splits a coefficient into sign and magnitude for printing.
fn signed_parts(c: &RationalFunction) -> (bool, RationalFunction) {
    let lead_negative = c
        .num()
        .leading()
        .map(|(_, v)| v.numer().sign() == num_bigint::Sign::Minus)
        .unwrap_or(false);
    if lead_negative && c.num().num_terms() == 1 {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

impl FourierOperator {
    /// Renders the operator with each `(k, l)` shift class on its own group,
    /// in the key order `(k, l, i, j, p, q)`.
    pub fn pretty(&self) -> String {
        self.to_string()
    }

    /// The same rendering with one `(k, l)` class per line.
    pub fn pretty_grouped(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut groups: BTreeMap<(i32, i32), FourierOperator> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups.entry((m.k, m.l)).or_default().terms.insert(*m, c.clone());
        }
        groups
            .iter()
            .map(|((k, l), op)| format!("[V1^{k} V2^{l}] {op}"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for FourierOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = signed_parts(c);
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono = m.to_string();
            if mono == "1" {
                if mag.is_compound() {
                    write!(f, "({mag})")?;
                } else {
                    write!(f, "{mag}")?;
                }
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else if mag.is_compound() {
                write!(f, "({mag})·{mono}")?;
            } else {
                write!(f, "{mag}·{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diff() -> RationalFunction {
        RationalFunction::mu1() - RationalFunction::mu2()
    }

    #[test]
    fn weyl_relation() {
        let lhs = &FourierOperator::dt() * &FourierOperator::t();
        let rhs = &(&FourierOperator::t() * &FourierOperator::dt()) + &FourierOperator::one();
        assert_eq!(lhs, rhs);
        assert_eq!(
            FourierOperator::dt().commutator(&FourierOperator::t()),
            FourierOperator::one()
        );
        assert!(FourierOperator::dt().commutator(&FourierOperator::s()).is_zero());
    }

    #[test]
    fn shift_moves_past_coefficients() {
        let v1 = FourierOperator::shift(1, 0);
        let mu1 = FourierOperator::scalar(RationalFunction::mu1());
        let expected = &FourierOperator::scalar(RationalFunction::mu1() + 1.into()) * &v1;
        assert_eq!(&v1 * &mu1, expected);
        // shifts commute
        assert_eq!(
            &FourierOperator::shift(1, 0) * &FourierOperator::shift(0, 1),
            &FourierOperator::shift(0, 1) * &FourierOperator::shift(1, 0)
        );
    }

    #[test]
    fn products_of_shifted_derivatives() {
        let a = &FourierOperator::dt() * &FourierOperator::shift(1, 0);
        let b = &FourierOperator::ds() * &FourierOperator::shift(0, 1);
        let expected = FourierOperator::monomial(RationalFunction::one(), FourierMonomial::new(0, 0, 1, 1, 1, 1));
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn addition_keeps_distinct_keys() {
        let a = &FourierOperator::t() * &FourierOperator::shift(1, 0);
        let b = &FourierOperator::t() * &FourierOperator::shift(0, 1);
        assert_eq!((&a + &b).len(), 2);
        assert!((&a - &a).is_zero());
        assert_eq!(&a + &FourierOperator::zero(), a);
    }

    #[test]
    fn pretty_printing() {
        assert_eq!(FourierOperator::zero().to_string(), "0");
        assert_eq!(FourierOperator::shift(-1, -1).to_string(), "V1^-1 V2^-1");
        let inv = RationalFunction::one() / diff();
        let c_image = (&(&FourierOperator::dt() * &FourierOperator::shift(1, 0))
            + &(&FourierOperator::ds() * &FourierOperator::shift(0, 1)))
            .scale(&inv);
        assert_eq!(c_image.to_string(), "1/(μ1 - μ2)·∂s V2 + 1/(μ1 - μ2)·∂t V1");
        let e11 = &(-&(&FourierOperator::t() * &FourierOperator::dt()))
            + &FourierOperator::scalar(
                RationalFunction::mu1() - RationalFunction::from_rational(crate::coeffs::rat(1, 2)),
            );
        assert_eq!(e11.to_string(), "(μ1 - 1/2) - t ∂t");
    }
}
