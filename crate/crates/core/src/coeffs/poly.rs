use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Exponent pair `(e1, e2)` of the monomial `μ1^e1 μ2^e2`.
///
/// Ordered graded-lexicographically with `μ1 > μ2`, so the last entry of a
/// [`ParamPoly`] is its leading term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub u32, pub u32);

impl Exponent {
    pub fn degree(self) -> u32 {
        self.0 + self.1
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in the two formal parameters `μ1`, `μ2` with rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    terms: BTreeMap<Exponent, Rational>,
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn monomial(c: Rational, e1: u32, e2: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponent(e1, e2), c);
        }
        Self { terms }
    }

    pub fn mu1() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn mu2() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The constant value, if the polynomial has degree zero.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Exponent(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|e| e.degree())
    }

    /// Leading term under graded-lex order with `μ1 > μ2`.
    pub fn leading(&self) -> Option<(Exponent, &Rational)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `μ1 -> μ1 + d1`, `μ2 -> μ2 + d2`.
    pub fn shift(&self, d1: i64, d2: i64) -> Self {
        if d1 == 0 && d2 == 0 {
            return self.clone();
        }
        let mut out = Self::zero();
        let (d1, d2) = (BigInt::from(d1), BigInt::from(d2));
        for (e, c) in &self.terms {
            for i in 0..=e.0 {
                let f1 = binomial(e.0, i) * num_traits::pow(d1.clone(), (e.0 - i) as usize);
                if f1.is_zero() {
                    continue;
                }
                for j in 0..=e.1 {
                    let f2 = binomial(e.1, j) * num_traits::pow(d2.clone(), (e.1 - j) as usize);
                    if f2.is_zero() {
                        continue;
                    }
                    out.add_term(Exponent(i, j), c * Rational::from_integer(&f1 * f2));
                }
            }
        }
        out
    }

    pub fn eval(&self, m1: Complex64, m2: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| rat_to_f64(c) * m1.powu(e.0) * m2.powu(e.1))
            .sum()
    }

    /// Sum of `|c| |m1|^e1 |m2|^e2`, the scale against which a vanishing
    /// value is judged.
    pub fn magnitude(&self, m1: Complex64, m2: Complex64) -> f64 {
        let (a1, a2) = (m1.norm(), m2.norm());
        self.terms
            .iter()
            .map(|(e, c)| rat_to_f64(c).abs() * a1.powi(e.0 as i32) * a2.powi(e.1 as i32))
            .sum()
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        let (le, lc) = divisor.leading()?;
        let lc = lc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((re, rc)) = rem.leading() {
            if re.0 < le.0 || re.1 < le.1 {
                return None;
            }
            let q = rc / &lc;
            let qe = Exponent(re.0 - le.0, re.1 - le.1);
            for (e, c) in &divisor.terms {
                rem.add_term(Exponent(e.0 + qe.0, e.1 + qe.1), -(c * &q));
            }
            quot.add_term(qe, q);
        }
        Some(quot)
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// If the polynomial depends on `μ1 - μ2` only and splits as
    /// `lc · Π (μ1 - μ2 - m)` with integer `m`, returns `(lc, [m...])`.
    pub fn difference_roots(&self) -> Option<(Rational, Vec<i64>)> {
        let deg = self.total_degree()?;
        // the top-degree part of h(μ1 - μ2) is a full binomial expansion
        let top = self.terms.keys().filter(|e| e.degree() == deg).count();
        if top != deg as usize + 1 {
            return None;
        }
        // p = h(μ1 - μ2) iff (∂μ1 + ∂μ2) p = 0; then h(x) = p(x, 0)
        let mut flow: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.0 > 0 {
                *flow.entry((e.0 - 1, e.1)).or_insert_with(Rational::zero) += c * Rational::from_integer(e.0.into());
            }
            if e.1 > 0 {
                *flow.entry((e.0, e.1 - 1)).or_insert_with(Rational::zero) += c * Rational::from_integer(e.1.into());
            }
        }
        if flow.values().any(|c| !c.is_zero()) {
            return None;
        }
        let mut h: Vec<Rational> = vec![Rational::zero(); deg as usize + 1];
        for (e, c) in &self.terms {
            if e.1 == 0 {
                h[e.0 as usize] = c.clone();
            }
        }
        let lc = h.last().cloned()?;
        let mut rem: Vec<Rational> = h;
        let mut roots = Vec::new();
        'outer: while rem.len() > 1 {
            let bound = 64i64;
            for m in (0..=bound).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] }) {
                if let Some(q) = synthetic_div(&rem, m) {
                    rem = q;
                    roots.push(m);
                    continue 'outer;
                }
            }
            return None;
        }
        roots.sort_unstable_by(|a, b| b.cmp(a));
        Some((lc, roots))
    }
}

/// Divides the dense polynomial `coeffs` (ascending) by `x - m`, if exact.
fn synthetic_div(coeffs: &[Rational], m: i64) -> Option<Vec<Rational>> {
    let m = Rational::from_integer(m.into());
    let n = coeffs.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (0..=n).rev() {
        let v = &coeffs[i] + &carry * &m;
        if i == 0 {
            return v.is_zero().then_some(q);
        }
        q[i - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

pub(crate) fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}

impl AddAssign<&ParamPoly> for ParamPoly {
    fn add_assign(&mut self, rhs: &ParamPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(Exponent(e1.0 + e2.0, e1.1 + e2.1), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(ParamPoly, Add add, Sub sub, Mul mul);

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

pub(crate) fn fmt_rational_coeff(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("({})", c)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let mut vars = String::new();
            for (name, k) in [("μ1", e.0), ("μ2", e.1)] {
                match k {
                    0 => {}
                    1 => vars.push_str(name),
                    _ => vars.push_str(&format!("{name}^{k}")),
                }
            }
            if vars.is_empty() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{vars}")?;
            } else {
                write!(f, "{}{vars}", fmt_rational_coeff(&a))?;
            }
        }
        Ok(())
    }
}
