use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::One;
use thiserror::Error;

use super::gcd::gcd;
use super::poly::ParamPoly;
use super::Rational;

/// Relative threshold under which a denominator value counts as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("denominator {den} vanishes at μ1 = {m1}, μ2 = {m2}")]
pub struct PoleError {
    pub den: String,
    pub m1: Complex64,
    pub m2: Complex64,
}

/// Element of ℚ(μ1, μ2) in canonical form.
///
/// Invariants: numerator and denominator are coprime, the denominator is
/// nonzero with leading coefficient one (graded-lex, `μ1 > μ2`), and zero is
/// stored as `0/1`. Equal functions therefore have identical fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: ParamPoly,
    den: ParamPoly,
}

impl RationalFunction {
    /// Builds `num / den` in canonical form. Panics if `den` is zero.
    pub fn new(num: ParamPoly, den: ParamPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::with_monic_den(num, den)
    }

    fn with_monic_den(num: ParamPoly, den: ParamPoly) -> Self {
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if lc.is_one() {
            Self { num, den }
        } else {
            let inv = lc.recip();
            Self {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(ParamPoly::one())
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        Self {
            num: p,
            den: ParamPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(ParamPoly::from_int(c))
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_poly(ParamPoly::constant(c))
    }

    pub fn mu1() -> Self {
        Self::from_poly(ParamPoly::mu1())
    }

    pub fn mu2() -> Self {
        Self::from_poly(ParamPoly::mu2())
    }

    pub fn num(&self) -> &ParamPoly {
        &self.num
    }

    pub fn den(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::with_monic_den(self.den.clone(), self.num.clone())
    }

    /// Substitutes `μ1 -> μ1 + d1`, `μ2 -> μ2 + d2`.
    ///
    /// Shifts preserve coprimality and the top-degree part, so no
    /// renormalisation is needed.
    pub fn shift(&self, d1: i64, d2: i64) -> Self {
        if (d1 == 0 && d2 == 0) || self.is_zero() {
            return self.clone();
        }
        Self {
            num: self.num.shift(d1, d2),
            den: self.den.shift(d1, d2),
        }
    }

    /// Floating evaluation at a complex parameter point.
    pub fn eval(&self, m1: Complex64, m2: Complex64) -> Result<Complex64, PoleError> {
        let d = self.den.eval(m1, m2);
        let scale = self.den.magnitude(m1, m2).max(1.0);
        if d.norm() <= POLE_TOLERANCE * scale {
            return Err(PoleError {
                den: self.den.to_string(),
                m1,
                m2,
            });
        }
        Ok(self.num.eval(m1, m2) / d)
    }

    /// Equality via cross-multiplication, independent of normalisation.
    pub fn cross_equal(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Integer offsets `m` such that the denominator is `Π (μ1 - μ2 - m)`,
    /// or `None` if it has any other factor.
    pub fn pole_lines(&self) -> Option<Vec<i64>> {
        if self.den.is_one() {
            return Some(Vec::new());
        }
        self.den.difference_roots().map(|(_, roots)| roots)
    }
}

/// Accumulates many fractions, adding numerators over equal denominators
/// and normalising once per distinct denominator.
#[derive(Clone, Debug, Default)]
pub struct RationalSum {
    groups: HashMap<ParamPoly, ParamPoly>,
}

impl RationalSum {
    /// Adds `num / den`; `den` must be nonzero.
    pub fn add_parts(&mut self, num: &ParamPoly, den: &ParamPoly) {
        if num.is_zero() {
            return;
        }
        match self.groups.get_mut(den) {
            Some(acc) => *acc += num,
            None => {
                self.groups.insert(den.clone(), num.clone());
            }
        }
    }

    pub fn add(&mut self, c: &RationalFunction) {
        self.add_parts(&c.num, &c.den);
    }

    pub fn finish(self) -> RationalFunction {
        let groups: Vec<(ParamPoly, ParamPoly)> = self.groups.into_iter().filter(|(_, n)| !n.is_zero()).collect();
        if groups.len() > 1 {
            if let Some(r) = Self::over_common_lines(&groups) {
                return r;
            }
        }
        let mut acc = RationalFunction::zero();
        for (den, num) in groups {
            acc = &acc + &RationalFunction::new(num, den);
        }
        acc
    }

    /// When every denominator is a product of lines `μ1 - μ2 - m`, brings
    /// all numerators over the least common multiple and normalises once.
    fn over_common_lines(groups: &[(ParamPoly, ParamPoly)]) -> Option<RationalFunction> {
        let mut factored = Vec::with_capacity(groups.len());
        let mut lcm: BTreeMap<i64, usize> = BTreeMap::new();
        for (den, num) in groups {
            let (lc, roots) = if den.is_one() {
                (Rational::one(), Vec::new())
            } else {
                den.difference_roots()?
            };
            let mut mult: BTreeMap<i64, usize> = BTreeMap::new();
            for m in roots {
                *mult.entry(m).or_default() += 1;
            }
            for (&m, &k) in &mult {
                let e = lcm.entry(m).or_default();
                *e = (*e).max(k);
            }
            factored.push((lc, mult, num));
        }
        let line = |m: i64| &(&ParamPoly::mu1() - &ParamPoly::mu2()) - &ParamPoly::from_int(m);
        let mut total = ParamPoly::zero();
        for (lc, mult, num) in factored {
            let mut term = num.scale(&lc.recip());
            for (&m, &k) in &lcm {
                let missing = k - mult.get(&m).copied().unwrap_or(0);
                if missing > 0 {
                    term = &term * &line(m).pow(missing as u32);
                }
            }
            total += &term;
        }
        let den = lcm
            .iter()
            .fold(ParamPoly::one(), |acc, (&m, &k)| &acc * &line(m).pow(k as u32));
        Some(if total.is_zero() {
            RationalFunction::zero()
        } else {
            RationalFunction::new(total, den)
        })
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<ParamPoly> for RationalFunction {
    fn from(p: ParamPoly) -> Self {
        Self::from_poly(p)
    }
}

impl From<i64> for RationalFunction {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RationalFunction::from_poly(num);
            }
            return RationalFunction::new(num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        RationalFunction::new(num, &(&d1 * &d2) * &g)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RationalFunction::with_monic_den(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.recip()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

/// Renders a denominator, returning whether it is a single parenthesised
/// factor.
fn fmt_den(den: &ParamPoly) -> (String, bool) {
    if let Some((lc, roots)) = den.difference_roots() {
        let mut s = String::new();
        if !lc.is_one() {
            s.push_str(&lc.to_string());
        }
        let single = lc.is_one() && roots.len() == 1;
        for m in roots {
            match m {
                0 => s.push_str("(μ1 - μ2)"),
                m if m > 0 => s.push_str(&format!("(μ1 - μ2 - {m})")),
                m => s.push_str(&format!("(μ1 - μ2 + {})", -m)),
            }
        }
        (s, single)
    } else {
        (format!("({den})"), true)
    }
}

impl RationalFunction {
    /// True when the printed form needs parentheses as a factor.
    pub fn is_compound(&self) -> bool {
        self.den.is_one() && self.num.num_terms() > 1
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        let (den, single) = fmt_den(&self.den);
        if single {
            write!(f, "{num}/{den}")
        } else {
            write!(f, "{num}/({den})")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diff() -> RationalFunction {
        RationalFunction::mu1() - RationalFunction::mu2()
    }

    #[test]
    fn rational_sum_matches_sequential_addition() {
        let line = |m: i64| &diff() - &RationalFunction::from_int(m);
        let parts = [
            line(0).recip(),
            &RationalFunction::mu1() / &(&line(1) * &line(0)),
            &RationalFunction::mu2() / &(&line(1) * &line(1)),
            RationalFunction::from_int(2),
            -&line(0).recip(),
        ];
        let mut sum = RationalSum::default();
        let mut seq = RationalFunction::zero();
        for p in &parts {
            sum.add(p);
            seq = &seq + p;
        }
        assert_eq!(sum.finish(), seq);
    }

    #[test]
    fn additive_identity_and_inverse() {
        let x = RationalFunction::one() / diff();
        assert_eq!(&x + &RationalFunction::zero(), x);
        assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn sum_of_adjacent_pole_lines() {
        let d = diff();
        let one = RationalFunction::one();
        let x = &one / &(&d + &one);
        let y = &one / &(&d - &one);
        let expected = (RationalFunction::from_int(2) * d.clone()) / (&(&d * &d) - &one);
        assert_eq!(&x + &y, expected);
    }

    #[test]
    fn multiplicative_cancellation() {
        let d = diff();
        let half = RationalFunction::from_rational(Rational::new(1.into(), 2.into()));
        let x = (RationalFunction::mu2() - half.clone()) / d.clone();
        assert_eq!(&x * &d, RationalFunction::mu2() - half);
        assert!((&d * &(RationalFunction::one() / d.clone())).is_one());
        assert!((&x * &RationalFunction::zero()).is_zero());
    }

    #[test]
    fn shifts() {
        let inv = RationalFunction::one() / diff();
        assert_eq!(RationalFunction::mu1().shift(1, 0), RationalFunction::mu1() + 1.into());
        assert_eq!(inv.shift(1, 1), inv);
        assert_eq!(inv.shift(0, 1), RationalFunction::one() / (diff() - 1.into()));
    }

    #[test]
    fn evaluation_and_poles() {
        let v = diff()
            .eval(Complex64::new(0.7, 0.31), Complex64::new(0.2, -0.11))
            .unwrap();
        assert!((v - Complex64::new(0.5, 0.42)).norm() < 1e-15);
        let m = Complex64::new(0.3, 0.1);
        assert!((RationalFunction::one() / diff()).eval(m, m).is_err());
        let half = RationalFunction::from_rational(Rational::new(1.into(), 2.into()));
        let root = (RationalFunction::mu1() - half.clone()) * (RationalFunction::mu2() - half);
        let h = Complex64::new(0.5, 0.0);
        assert_eq!(root.eval(h, h).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let d = diff().num().scale(&Rational::from_integer((-3).into()));
        let x = RationalFunction::new(ParamPoly::one(), d);
        assert!(x.den().leading().unwrap().1.is_one());
        assert!(x.cross_equal(&(RationalFunction::from_rational(Rational::new((-1).into(), 3.into())) / diff())));
    }

    #[test]
    fn display_factors_pole_lines() {
        let d = diff();
        let x = RationalFunction::one() / (&d * &(&d + &RationalFunction::one()));
        assert_eq!(x.to_string(), "1/((μ1 - μ2)(μ1 - μ2 + 1))");
        assert_eq!((RationalFunction::one() / d).to_string(), "1/(μ1 - μ2)");
        assert_eq!(x.pole_lines(), Some(vec![0, -1]));
    }
}
