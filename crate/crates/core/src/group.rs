//! Differential operators on GL(2, ℝ) with polynomial coefficients in the
//! matrix entries `a, b, c, d`, localized at `Δ = ad - bc`.
//!
//! Normal form: `Σ p_α(a, b, c, d) Δ^-N_α ∂a^α0 ∂b^α1 ∂c^α2 ∂d^α3`, with
//! every coefficient reduced so that `p_α` is not divisible by `Δ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::coeffs::{binomial, rat_to_f64, Rational};
use crate::symfunc::{SupportBox, SymExpr, Var};

/// One of the four matrix entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    A,
    B,
    C,
    D,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::A, Coord::B, Coord::C, Coord::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["a", "b", "c", "d"][self.index()]
    }

    pub fn var(self) -> Var {
        Var::MATRIX[self.index()]
    }

    fn unit(self) -> [u32; 4] {
        let mut e = [0; 4];
        e[self.index()] = 1;
        e
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("support box meets det = 0 while the operator has a (ad - bc)^-1 factor")]
pub struct SupportError;

/// Polynomial in `a, b, c, d` with rational coefficients, keyed by the
/// exponent vector. Keys compare lexicographically, so the last key is the
/// leading term for the order `a > b > c > d`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoordPoly {
    terms: BTreeMap<[u32; 4], Rational>,
}

impl CoordPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, [0; 4])
    }

    pub fn monomial(c: Rational, e: [u32; 4]) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn coord(x: Coord) -> Self {
        Self::monomial(Rational::one(), x.unit())
    }

    /// `ad - bc`.
    pub fn det() -> Self {
        let mut p = Self::monomial(Rational::one(), [1, 0, 0, 1]);
        p.add_term([0, 1, 1, 0], -Rational::one());
        p
    }

    fn add_term(&mut self, e: [u32; 4], c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32; 4], &Rational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn derivative(&self, x: Coord) -> Self {
        let i = x.index();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                out.add_term(f, c * Rational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Exact quotient by `Δ`, or `None` when `Δ` does not divide.
    pub fn div_det(&self) -> Option<Self> {
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let det = Self::det();
        while let Some((lead, c)) = rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            if lead[0] == 0 || lead[3] == 0 {
                return None;
            }
            let m = Self::monomial(c, [lead[0] - 1, lead[1], lead[2], lead[3] - 1]);
            rem = &rem - &(&m * &det);
            quot = &quot + &m;
        }
        Some(quot)
    }

    pub fn eval(&self, m: [f64; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| rat_to_f64(c) * (0..4).map(|i| m[i].powi(e[i] as i32)).product::<f64>())
            .sum()
    }

    pub fn to_sym(&self) -> SymExpr {
        SymExpr::sum(self.terms.iter().map(|(e, c)| {
            let mut fs = vec![SymExpr::constant(rat_to_f64(c))];
            for x in Coord::ALL {
                fs.push(SymExpr::var(x.var()).powi(e[x.index()] as i32));
            }
            SymExpr::product(fs)
        }))
    }
}

impl Add for &CoordPoly {
    type Output = CoordPoly;
    fn add(self, rhs: &CoordPoly) -> CoordPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &CoordPoly {
    type Output = CoordPoly;
    fn sub(self, rhs: &CoordPoly) -> CoordPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &CoordPoly {
    type Output = CoordPoly;
    fn mul(self, rhs: &CoordPoly) -> CoordPoly {
        let mut out = CoordPoly::zero();
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                let g = [e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]];
                out.add_term(g, c * d);
            }
        }
        out
    }
}

impl Neg for &CoordPoly {
    type Output = CoordPoly;
    fn neg(self) -> CoordPoly {
        self.scale(&-Rational::one())
    }
}

/// `num · Δ^-detpow` with `detpow` minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedCoeff {
    num: CoordPoly,
    detpow: u32,
}

impl LocalizedCoeff {
    pub fn new(mut num: CoordPoly, mut detpow: u32) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        while detpow > 0 {
            match num.div_det() {
                Some(q) => {
                    num = q;
                    detpow -= 1;
                }
                None => break,
            }
        }
        Self { num, detpow }
    }

    pub fn zero() -> Self {
        Self {
            num: CoordPoly::zero(),
            detpow: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_poly(CoordPoly::one())
    }

    pub fn from_poly(p: CoordPoly) -> Self {
        Self { num: p, detpow: 0 }
    }

    pub fn num(&self) -> &CoordPoly {
        &self.num
    }

    pub fn detpow(&self) -> u32 {
        self.detpow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.detpow == 0 {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn lift(&self, n: u32) -> CoordPoly {
        let mut p = self.num.clone();
        let det = CoordPoly::det();
        for _ in self.detpow..n {
            p = &p * &det;
        }
        p
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.num.scale(c), self.detpow)
    }

    /// `∂x (p Δ^-N) = (∂x p · Δ - N p ∂x Δ) Δ^-(N+1)`.
    pub fn derivative(&self, x: Coord) -> Self {
        if self.detpow == 0 {
            return Self::from_poly(self.num.derivative(x));
        }
        let det = CoordPoly::det();
        let n = Rational::from_integer(self.detpow.into());
        let num = &(&self.num.derivative(x) * &det) - &(&self.num * &det.derivative(x)).scale(&n);
        Self::new(num, self.detpow + 1)
    }

    pub fn eval(&self, m: [f64; 4]) -> f64 {
        let det = m[0] * m[3] - m[1] * m[2];
        self.num.eval(m) * det.powi(-(self.detpow as i32))
    }

    pub fn to_sym(&self) -> SymExpr {
        self.num.to_sym() * SymExpr::det_inv().powi(self.detpow as i32)
    }
}

impl Add for &LocalizedCoeff {
    type Output = LocalizedCoeff;
    fn add(self, rhs: &LocalizedCoeff) -> LocalizedCoeff {
        let n = self.detpow.max(rhs.detpow);
        LocalizedCoeff::new(&self.lift(n) + &rhs.lift(n), n)
    }
}

impl Sub for &LocalizedCoeff {
    type Output = LocalizedCoeff;
    fn sub(self, rhs: &LocalizedCoeff) -> LocalizedCoeff {
        let n = self.detpow.max(rhs.detpow);
        LocalizedCoeff::new(&self.lift(n) - &rhs.lift(n), n)
    }
}

impl Mul for &LocalizedCoeff {
    type Output = LocalizedCoeff;
    fn mul(self, rhs: &LocalizedCoeff) -> LocalizedCoeff {
        LocalizedCoeff::new(&self.num * &rhs.num, self.detpow + rhs.detpow)
    }
}

/// Derivative orders `(∂a, ∂b, ∂c, ∂d)`.
pub type DerivOrders = [u32; 4];

/// An element of the localized Weyl algebra in normal order: coefficient
/// on the left, derivatives on the right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupOperator {
    terms: BTreeMap<DerivOrders, LocalizedCoeff>,
}

impl GroupOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Self::from_coeff(LocalizedCoeff::from_poly(CoordPoly::constant(c)))
    }

    pub fn from_int(c: i64) -> Self {
        Self::scalar(Rational::from_integer(c.into()))
    }

    pub fn from_coeff(c: LocalizedCoeff) -> Self {
        Self::monomial(c, [0; 4])
    }

    pub fn monomial(c: LocalizedCoeff, d: DerivOrders) -> Self {
        let mut op = Self::zero();
        op.add_term(d, c);
        op
    }

    /// Multiplication by a matrix entry.
    pub fn coord(x: Coord) -> Self {
        Self::from_coeff(LocalizedCoeff::from_poly(CoordPoly::coord(x)))
    }

    /// Multiplication by `(ad - bc)^-1`.
    pub fn det_inv() -> Self {
        Self::from_coeff(LocalizedCoeff::new(CoordPoly::one(), 1))
    }

    /// Multiplication by `ad - bc`.
    pub fn det() -> Self {
        Self::from_coeff(LocalizedCoeff::from_poly(CoordPoly::det()))
    }

    pub fn deriv(x: Coord) -> Self {
        Self::monomial(LocalizedCoeff::one(), x.unit())
    }

    fn add_term(&mut self, d: DerivOrders, c: LocalizedCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get(&d) {
            Some(old) => {
                let s = old + &c;
                if s.is_zero() {
                    self.terms.remove(&d);
                } else {
                    self.terms.insert(d, s);
                }
            }
            None => {
                self.terms.insert(d, c);
            }
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&DerivOrders, &LocalizedCoeff)> {
        self.terms.iter()
    }

    pub fn as_scalar(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0; 4]).and_then(|c| c.as_constant()),
            _ => None,
        }
    }

    /// Largest power of `Δ^-1` appearing in any coefficient.
    pub fn max_detpow(&self) -> u32 {
        self.terms.values().map(|c| c.detpow).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (d, x) in &self.terms {
            out.add_term(*d, x.scale(c));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }
}

fn mul_into(out: &mut GroupOperator, f: &LocalizedCoeff, alpha: DerivOrders, g: &LocalizedCoeff, beta: DerivOrders) {
    // f ∂^α g ∂^β = f Σ_{γ ≤ α} C(α, γ) (∂^γ g) ∂^(α - γ + β)
    let mut derivs: HashMap<DerivOrders, LocalizedCoeff> = HashMap::new();
    derivs.insert([0; 4], g.clone());
    for g0 in 0..=alpha[0] {
        for g1 in 0..=alpha[1] {
            for g2 in 0..=alpha[2] {
                for g3 in 0..=alpha[3] {
                    let gamma = [g0, g1, g2, g3];
                    let dg = derivative_of(&mut derivs, gamma);
                    if dg.is_zero() {
                        continue;
                    }
                    let mut c = Rational::one();
                    for i in 0..4 {
                        c *= Rational::from_integer(binomial(alpha[i], gamma[i]));
                    }
                    let d = [
                        alpha[0] - g0 + beta[0],
                        alpha[1] - g1 + beta[1],
                        alpha[2] - g2 + beta[2],
                        alpha[3] - g3 + beta[3],
                    ];
                    out.add_term(d, (f * &dg).scale(&c));
                }
            }
        }
    }
}

fn derivative_of(memo: &mut HashMap<DerivOrders, LocalizedCoeff>, gamma: DerivOrders) -> LocalizedCoeff {
    if let Some(c) = memo.get(&gamma) {
        return c.clone();
    }
    let i = (0..4).rev().find(|&i| gamma[i] > 0).unwrap();
    let mut prev = gamma;
    prev[i] -= 1;
    let d = derivative_of(memo, prev).derivative(Coord::ALL[i]);
    memo.insert(gamma, d.clone());
    d
}

impl Add for &GroupOperator {
    type Output = GroupOperator;
    fn add(self, rhs: &GroupOperator) -> GroupOperator {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(*d, c.clone());
        }
        out
    }
}

impl Sub for &GroupOperator {
    type Output = GroupOperator;
    fn sub(self, rhs: &GroupOperator) -> GroupOperator {
        self + &(-rhs)
    }
}

impl Neg for &GroupOperator {
    type Output = GroupOperator;
    fn neg(self) -> GroupOperator {
        self.scale(&-Rational::one())
    }
}

impl Mul for &GroupOperator {
    type Output = GroupOperator;
    fn mul(self, rhs: &GroupOperator) -> GroupOperator {
        let mut out = GroupOperator::zero();
        for (alpha, f) in &self.terms {
            for (beta, g) in &rhs.terms {
                mul_into(&mut out, f, *alpha, g, *beta);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GroupOperator {
            type Output = GroupOperator;
            fn $m(self, rhs: GroupOperator) -> GroupOperator {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for GroupOperator {
    type Output = GroupOperator;
    fn neg(self) -> GroupOperator {
        -&self
    }
}

/// Applies `d` to `f`. Fails when `d` carries a `Δ^-1` factor and the
/// declared support of `f` is not bounded away from `det = 0`.
pub fn gop_apply(d: &GroupOperator, f: &SymExpr, support: &SupportBox) -> Result<SymExpr, SupportError> {
    if d.max_detpow() > 0 && !support.avoids_singular() {
        return Err(SupportError);
    }
    let mut terms = Vec::new();
    for (orders, c) in d.terms() {
        let mut df = f.clone();
        for x in Coord::ALL {
            for _ in 0..orders[x.index()] {
                df = df.diff(x.var());
            }
        }
        terms.push(c.to_sym() * df);
    }
    Ok(SymExpr::sum(terms))
}

impl fmt::Display for GroupOperator {
    /// Prints in the surface syntax accepted by [`crate::parse::parse_operator`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (orders, c) in self.terms.iter().rev() {
            for (e, x) in c.num.terms().rev() {
                let neg = x.is_negative();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                }
                first = false;
                let mut factors = Vec::new();
                let ax = x.abs();
                if !ax.is_one() {
                    factors.push(ax.to_string());
                }
                for v in Coord::ALL {
                    push_power(&mut factors, v.name(), e[v.index()]);
                }
                push_power(&mut factors, "Dinv", c.detpow);
                for v in Coord::ALL {
                    push_power(&mut factors, &format!("d{}", v.name()), orders[v.index()]);
                }
                if factors.is_empty() {
                    factors.push("1".into());
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn push_power(out: &mut Vec<String>, name: &str, k: u32) {
    match k {
        0 => {}
        1 => out.push(name.to_string()),
        _ => out.push(format!("{name}^{k}")),
    }
}

/// Weighted derivation `wx = ∂x - (∂x Δ) Δ^-1`.
pub fn weighted_derivation(x: Coord) -> GroupOperator {
    use Coord::*;
    let (partner, sign) = match x {
        A => (D, -1),
        B => (C, 1),
        C => (B, 1),
        D => (A, -1),
    };
    GroupOperator::deriv(x)
        + (GroupOperator::coord(partner) * GroupOperator::det_inv()).scale(&Rational::from_integer(sign.into()))
}

/// Right-invariant vector fields `e^r_ij`, indexed `[i-1][j-1]`.
pub fn right_fields() -> [[GroupOperator; 2]; 2] {
    use Coord::*;
    let f = |x: Coord, dx: Coord, y: Coord, dy: Coord| {
        -(GroupOperator::coord(x) * GroupOperator::deriv(dx) + GroupOperator::coord(y) * GroupOperator::deriv(dy))
    };
    [[f(A, A, B, B), f(C, A, D, B)], [f(A, C, B, D), f(C, C, D, D)]]
}

/// Left-invariant vector fields `e^l_ij`, indexed `[i-1][j-1]`.
pub fn left_fields() -> [[GroupOperator; 2]; 2] {
    use Coord::*;
    let f = |x: Coord, dx: Coord, y: Coord, dy: Coord| {
        GroupOperator::coord(x) * GroupOperator::deriv(dx) + GroupOperator::coord(y) * GroupOperator::deriv(dy)
    };
    [[f(A, A, C, C), f(A, B, C, D)], [f(B, A, D, C), f(B, B, D, D)]]
}
