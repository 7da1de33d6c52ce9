//! Closed-form test functions: expression trees built from constants,
//! variables, sums, products, integer powers, the inverse determinant and
//! the bump `ψ_r(x) = exp(-1/(1 - (x/r)^2))` on `|x| < r` (zero elsewhere).
//!
//! Trees are immutable and shared through `Arc`, so derivatives and
//! substitutions reuse subexpressions. Bulk evaluation goes through
//! [`Tape`], a flattened form with common subexpressions merged.

mod tape;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

pub use tape::Tape;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymError {
    #[error("determinant vanishes at the evaluation point")]
    DetZero,
    #[error("bump radius {0} leaves the support touching det = 0")]
    BadRadius(f64),
}

/// Variables a test function may depend on.
///
/// `A..D` are the matrix entries, `X, Y` the plane coordinates of the
/// plane model, and `T, S, U, V, W` the kernel and integration variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    A,
    B,
    C,
    D,
    X,
    Y,
    T,
    S,
    U,
    V,
    W,
}

impl Var {
    pub const COUNT: usize = 11;
    pub const ALL: [Var; Var::COUNT] = [
        Var::A,
        Var::B,
        Var::C,
        Var::D,
        Var::X,
        Var::Y,
        Var::T,
        Var::S,
        Var::U,
        Var::V,
        Var::W,
    ];
    pub const MATRIX: [Var; 4] = [Var::A, Var::B, Var::C, Var::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["a", "b", "c", "d", "x", "y", "t", "s", "u", "v", "w"][self.index()]
    }
}

/// Values for every [`Var`], indexed by [`Var::index`].
pub type Point = [f64; Var::COUNT];

/// Builds a [`Point`] with the listed variables set and the rest zero.
pub fn point(values: &[(Var, f64)]) -> Point {
    let mut p = [0.0; Var::COUNT];
    for (v, x) in values {
        p[v.index()] = *x;
    }
    p
}

#[derive(Debug)]
pub(crate) enum Node {
    Const(f64),
    Var(Var),
    Add(Vec<SymExpr>),
    Mul(Vec<SymExpr>),
    Pow(SymExpr, i32),
    Bump {
        radius: f64,
        arg: SymExpr,
    },
    /// `1 / (m0 m3 - m1 m2)` for the four matrix-entry expressions.
    DetInv([SymExpr; 4]),
}

#[derive(Clone, Debug)]
pub struct SymExpr(Arc<Node>);

impl SymExpr {
    fn wrap(n: Node) -> Self {
        SymExpr(Arc::new(n))
    }

    pub(crate) fn node(&self) -> &Node {
        &self.0
    }

    fn key(&self) -> *const Node {
        Arc::as_ptr(&self.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::wrap(Node::Const(c))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn var(v: Var) -> Self {
        Self::wrap(Node::Var(v))
    }

    pub fn as_const(&self) -> Option<f64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn sum<I: IntoIterator<Item = SymExpr>>(terms: I) -> Self {
        let mut c = 0.0;
        let mut out = Vec::new();
        let push = |e: SymExpr, out: &mut Vec<SymExpr>, c: &mut f64| match e.node() {
            Node::Const(x) => *c += x,
            _ => out.push(e),
        };
        for t in terms {
            if let Node::Add(inner) = t.node() {
                for e in inner {
                    push(e.clone(), &mut out, &mut c);
                }
            } else {
                push(t, &mut out, &mut c);
            }
        }
        if c != 0.0 {
            out.push(Self::constant(c));
        }
        match out.len() {
            0 => Self::zero(),
            1 => out.pop().unwrap(),
            _ => Self::wrap(Node::Add(out)),
        }
    }

    pub fn product<I: IntoIterator<Item = SymExpr>>(factors: I) -> Self {
        let mut c = 1.0;
        let mut out = Vec::new();
        for f in factors {
            let items: Vec<SymExpr> = match f.node() {
                Node::Mul(inner) => inner.clone(),
                _ => vec![f],
            };
            for e in items {
                match e.node() {
                    Node::Const(x) => c *= x,
                    _ => out.push(e),
                }
            }
        }
        if c == 0.0 {
            return Self::zero();
        }
        if out.is_empty() {
            return Self::constant(c);
        }
        if c != 1.0 {
            out.insert(0, Self::constant(c));
        }
        if out.len() == 1 {
            return out.pop().unwrap();
        }
        Self::wrap(Node::Mul(out))
    }

    pub fn powi(&self, n: i32) -> Self {
        match (n, self.node()) {
            (0, _) => Self::one(),
            (1, _) => self.clone(),
            (_, Node::Const(c)) => Self::constant(c.powi(n)),
            (_, Node::Pow(inner, m)) => inner.powi(m * n),
            _ => Self::wrap(Node::Pow(self.clone(), n)),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::product([Self::constant(c), self.clone()])
    }

    /// The bump `ψ_r(arg)`.
    pub fn bump(radius: f64, arg: SymExpr) -> Self {
        Self::wrap(Node::Bump { radius, arg })
    }

    /// `ψ_r(v - center)`.
    pub fn bump_at(v: Var, center: f64, radius: f64) -> Self {
        Self::bump(radius, Self::var(v) - Self::constant(center))
    }

    /// `(ad - bc)^-1` in the matrix variables.
    pub fn det_inv() -> Self {
        Self::det_inv_of([
            Self::var(Var::A),
            Self::var(Var::B),
            Self::var(Var::C),
            Self::var(Var::D),
        ])
    }

    pub fn det_inv_of(entries: [SymExpr; 4]) -> Self {
        Self::wrap(Node::DetInv(entries))
    }

    /// Exact partial derivative.
    pub fn diff(&self, v: Var) -> SymExpr {
        let mut memo = HashMap::new();
        self.diff_memo(v, &mut memo)
    }

    /// Mixed partial derivative `∂^n` over the listed variables.
    pub fn diff_many(&self, vars: &[Var]) -> SymExpr {
        vars.iter().fold(self.clone(), |e, v| e.diff(*v))
    }

    fn diff_memo(&self, v: Var, memo: &mut HashMap<*const Node, SymExpr>) -> SymExpr {
        if let Some(d) = memo.get(&self.key()) {
            return d.clone();
        }
        let d = match self.node() {
            Node::Const(_) => Self::zero(),
            Node::Var(w) => Self::constant(if *w == v { 1.0 } else { 0.0 }),
            Node::Add(terms) => Self::sum(terms.iter().map(|t| t.diff_memo(v, memo))),
            Node::Mul(factors) => {
                let mut terms = Vec::new();
                for (i, f) in factors.iter().enumerate() {
                    let df = f.diff_memo(v, memo);
                    if df.is_zero() {
                        continue;
                    }
                    let mut fs = factors.clone();
                    fs[i] = df;
                    terms.push(Self::product(fs));
                }
                Self::sum(terms)
            }
            Node::Pow(x, n) => {
                let dx = x.diff_memo(v, memo);
                if dx.is_zero() {
                    Self::zero()
                } else {
                    Self::product([Self::constant(*n as f64), x.powi(n - 1), dx])
                }
            }
            Node::Bump { radius, arg } => {
                let da = arg.diff_memo(v, memo);
                if da.is_zero() {
                    Self::zero()
                } else {
                    // ψ'(x) = ψ(x) · (-2 r² x) / (r² - x²)²
                    let r2 = radius * radius;
                    let gap = Self::constant(r2) - arg.powi(2);
                    Self::product([self.clone(), Self::constant(-2.0 * r2), arg.clone(), gap.powi(-2), da])
                }
            }
            Node::DetInv(m) => {
                let dm: Vec<SymExpr> = m.iter().map(|e| e.diff_memo(v, memo)).collect();
                let ddet = Self::sum([
                    Self::product([dm[0].clone(), m[3].clone()]),
                    Self::product([m[0].clone(), dm[3].clone()]),
                    -Self::product([dm[1].clone(), m[2].clone()]),
                    -Self::product([m[1].clone(), dm[2].clone()]),
                ]);
                if ddet.is_zero() {
                    Self::zero()
                } else {
                    Self::product([Self::constant(-1.0), self.powi(2), ddet])
                }
            }
        };
        memo.insert(self.key(), d.clone());
        d
    }

    /// Replaces variables by expressions.
    pub fn subst(&self, map: &[(Var, SymExpr)]) -> SymExpr {
        let mut table: [Option<SymExpr>; Var::COUNT] = Default::default();
        for (v, e) in map {
            table[v.index()] = Some(e.clone());
        }
        let mut memo = HashMap::new();
        self.subst_memo(&table, &mut memo)
    }

    fn subst_memo(&self, table: &[Option<SymExpr>; Var::COUNT], memo: &mut HashMap<*const Node, SymExpr>) -> SymExpr {
        if let Some(e) = memo.get(&self.key()) {
            return e.clone();
        }
        let e = match self.node() {
            Node::Const(_) => self.clone(),
            Node::Var(v) => table[v.index()].clone().unwrap_or_else(|| self.clone()),
            Node::Add(ts) => Self::sum(ts.iter().map(|t| t.subst_memo(table, memo))),
            Node::Mul(fs) => Self::product(fs.iter().map(|f| f.subst_memo(table, memo))),
            Node::Pow(x, n) => x.subst_memo(table, memo).powi(*n),
            Node::Bump { radius, arg } => Self::bump(*radius, arg.subst_memo(table, memo)),
            Node::DetInv(m) => Self::det_inv_of([
                m[0].subst_memo(table, memo),
                m[1].subst_memo(table, memo),
                m[2].subst_memo(table, memo),
                m[3].subst_memo(table, memo),
            ]),
        };
        memo.insert(self.key(), e.clone());
        e
    }

    /// Pointwise evaluation. A product with a zero factor is zero even if
    /// another factor is infinite, so bump derivatives vanish on the seam.
    pub fn eval(&self, p: &Point) -> Result<f64, SymError> {
        Ok(match self.node() {
            Node::Const(c) => *c,
            Node::Var(v) => p[v.index()],
            Node::Add(ts) => {
                let mut acc = 0.0;
                for t in ts {
                    acc += t.eval(p)?;
                }
                acc
            }
            Node::Mul(fs) => {
                let mut acc = 1.0;
                let mut vals = Vec::with_capacity(fs.len());
                for f in fs {
                    let x = f.eval(p)?;
                    if x == 0.0 {
                        return Ok(0.0);
                    }
                    vals.push(x);
                }
                for x in vals {
                    acc *= x;
                }
                acc
            }
            Node::Pow(x, n) => x.eval(p)?.powi(*n),
            Node::Bump { radius, arg } => bump_value(arg.eval(p)?, *radius),
            Node::DetInv(m) => {
                let det = m[0].eval(p)? * m[3].eval(p)? - m[1].eval(p)? * m[2].eval(p)?;
                if det == 0.0 {
                    return Err(SymError::DetZero);
                }
                1.0 / det
            }
        })
    }

    /// Flattens the expression for fast repeated evaluation.
    pub fn compile(&self) -> Tape {
        Tape::compile(self)
    }

    /// Number of distinct nodes reachable from the root.
    pub fn node_count(&self) -> usize {
        fn walk(e: &SymExpr, seen: &mut std::collections::HashSet<*const Node>) {
            if !seen.insert(e.key()) {
                return;
            }
            match e.node() {
                Node::Const(_) | Node::Var(_) => {}
                Node::Add(xs) | Node::Mul(xs) => xs.iter().for_each(|x| walk(x, seen)),
                Node::Pow(x, _) => walk(x, seen),
                Node::Bump { arg, .. } => walk(arg, seen),
                Node::DetInv(m) => m.iter().for_each(|x| walk(x, seen)),
            }
        }
        let mut seen = std::collections::HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }
}

#[inline]
pub(crate) fn bump_value(x: f64, radius: f64) -> f64 {
    let z = x / radius;
    if z.abs() < 1.0 {
        (-1.0 / (1.0 - z * z)).exp()
    } else {
        0.0
    }
}

impl Add for SymExpr {
    type Output = SymExpr;
    fn add(self, rhs: SymExpr) -> SymExpr {
        SymExpr::sum([self, rhs])
    }
}

impl Sub for SymExpr {
    type Output = SymExpr;
    fn sub(self, rhs: SymExpr) -> SymExpr {
        SymExpr::sum([self, -rhs])
    }
}

impl Mul for SymExpr {
    type Output = SymExpr;
    fn mul(self, rhs: SymExpr) -> SymExpr {
        SymExpr::product([self, rhs])
    }
}

impl Neg for SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        self.scale(-1.0)
    }
}

impl Add for &SymExpr {
    type Output = SymExpr;
    fn add(self, rhs: &SymExpr) -> SymExpr {
        self.clone() + rhs.clone()
    }
}

impl Sub for &SymExpr {
    type Output = SymExpr;
    fn sub(self, rhs: &SymExpr) -> SymExpr {
        self.clone() - rhs.clone()
    }
}

impl Mul for &SymExpr {
    type Output = SymExpr;
    fn mul(self, rhs: &SymExpr) -> SymExpr {
        self.clone() * rhs.clone()
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(v) => write!(f, "{}", v.name()),
            Node::Add(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Node::Mul(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Node::Pow(x, n) => write!(f, "({x})^{n}"),
            Node::Bump { radius, arg } => write!(f, "psi_{radius}({arg})"),
            Node::DetInv(m) => write!(f, "1/({}*{} - {}*{})", m[0], m[3], m[1], m[2]),
        }
    }
}

/// Product of closed intervals carrying a test function's support.
/// `detmin` bounds `|ad - bc|` from below on the box; it is positive exactly
/// when the box stays on one side of `det = 0` (NaN when the box does not
/// constrain all four matrix entries).
#[derive(Clone, Debug, PartialEq)]
pub struct SupportBox {
    pub intervals: Vec<(Var, f64, f64)>,
    pub detmin: f64,
}

impl SupportBox {
    pub fn new(intervals: Vec<(Var, f64, f64)>) -> Self {
        let mut b = Self {
            intervals,
            detmin: f64::NAN,
        };
        if let Some((lo, hi)) = b.det_range() {
            b.detmin = lo.max(-hi);
        }
        b
    }

    pub fn interval(&self, v: Var) -> Option<(f64, f64)> {
        self.intervals
            .iter()
            .find(|(w, _, _)| *w == v)
            .map(|(_, lo, hi)| (*lo, *hi))
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.intervals
            .iter()
            .all(|(v, lo, hi)| (*lo..=*hi).contains(&p[v.index()]))
    }

    /// Interval-arithmetic enclosure of `ad - bc` over the box.
    pub fn det_range(&self) -> Option<(f64, f64)> {
        let get = |v| self.interval(v);
        match (get(Var::A), get(Var::B), get(Var::C), get(Var::D)) {
            (Some(a), Some(b), Some(c), Some(d)) => {
                let (ad_lo, ad_hi) = interval_mul(a, d);
                let (bc_lo, bc_hi) = interval_mul(b, c);
                Some((ad_lo - bc_hi, ad_hi - bc_lo))
            }
            _ => None,
        }
    }

    /// True when the determinant is bounded away from zero on the box.
    pub fn avoids_singular(&self) -> bool {
        self.detmin > 0.0
    }
}

pub(crate) fn interval_mul(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    let c = [x.0 * y.0, x.0 * y.1, x.1 * y.0, x.1 * y.1];
    (
        c.iter().cloned().fold(f64::INFINITY, f64::min),
        c.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    )
}

/// The reference test function on the group,
/// `F(a, b, c, d) = ψ_r(a - 1) ψ_r(b) ψ_r(c) ψ_r(d - 1)`, supported in a box
/// around the identity matrix.
pub fn standard_bump(radius: f64) -> Result<(SymExpr, SupportBox), SymError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(SymError::BadRadius(radius));
    }
    let r = radius;
    let f = SymExpr::product([
        SymExpr::bump_at(Var::A, 1.0, r),
        SymExpr::bump_at(Var::B, 0.0, r),
        SymExpr::bump_at(Var::C, 0.0, r),
        SymExpr::bump_at(Var::D, 1.0, r),
    ]);
    let support = SupportBox::new(vec![
        (Var::A, 1.0 - r, 1.0 + r),
        (Var::B, -r, r),
        (Var::C, -r, r),
        (Var::D, 1.0 - r, 1.0 + r),
    ]);
    if support.detmin.is_nan() || support.detmin <= 0.0 {
        return Err(SymError::BadRadius(radius));
    }
    Ok((f, support))
}

/// The standard bump moved to the other sheet of the group,
/// `ψ_r(a + 1) ψ_r(b) ψ_r(c) ψ_r(d - 1)`, supported where `det < 0`.
pub fn reflected_bump(radius: f64) -> Result<(SymExpr, SupportBox), SymError> {
    let (f, support) = standard_bump(radius)?;
    let f = f.subst(&[(Var::A, -SymExpr::var(Var::A))]);
    let mut intervals = support.intervals;
    intervals[0] = (Var::A, -1.0 - radius, -1.0 + radius);
    Ok((f, SupportBox::new(intervals)))
}

/// The reference test function of the plane model,
/// `φ(x, y) = ψ_{1/2}(x - 2) ψ_1(y)`.
pub fn standard_plane_bump() -> (SymExpr, SupportBox) {
    let phi = SymExpr::bump_at(Var::X, 2.0, 0.5) * SymExpr::bump_at(Var::Y, 0.0, 1.0);
    let support = SupportBox::new(vec![(Var::X, 1.5, 2.5), (Var::Y, -1.0, 1.0)]);
    (phi, support)
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = std::f64::consts::E;

    fn sample_points() -> Vec<Point> {
        // fixed in-support points of the standard bump with r = 0.4
        [
            [1.11, 0.07, -0.13, 0.93],
            [0.87, -0.21, 0.05, 1.19],
            [1.25, 0.18, 0.22, 0.81],
            [0.95, -0.03, -0.27, 1.04],
            [1.02, 0.29, 0.11, 1.28],
        ]
        .iter()
        .map(|m| point(&[(Var::A, m[0]), (Var::B, m[1]), (Var::C, m[2]), (Var::D, m[3])]))
        .collect()
    }

    #[test]
    fn bump_values() {
        let psi = SymExpr::bump_at(Var::X, 0.0, 0.4);
        assert!((psi.eval(&point(&[(Var::X, 0.0)])).unwrap() - 1.0 / E).abs() < 1e-16);
        assert_eq!(psi.eval(&point(&[(Var::X, 0.4)])).unwrap(), 0.0);
        assert_eq!(psi.eval(&point(&[(Var::X, -0.7)])).unwrap(), 0.0);
        let d = psi.diff(Var::X);
        assert_eq!(d.eval(&point(&[(Var::X, 0.0)])).unwrap(), 0.0);
        assert_eq!(d.eval(&point(&[(Var::X, 0.4)])).unwrap(), 0.0);
    }

    #[test]
    fn standard_bump_support() {
        let (f, b) = standard_bump(0.4).unwrap();
        assert!((b.detmin - 0.2).abs() < 1e-15);
        let id = point(&[(Var::A, 1.0), (Var::D, 1.0)]);
        assert!((f.eval(&id).unwrap() - (-4.0f64).exp()).abs() < 1e-17);
        let out = point(&[(Var::A, 1.5), (Var::D, 1.0)]);
        assert_eq!(f.eval(&out).unwrap(), 0.0);
        assert!(matches!(standard_bump(0.5), Err(SymError::BadRadius(_))));
        assert!(matches!(standard_bump(-0.1), Err(SymError::BadRadius(_))));
    }

    #[test]
    fn reflected_bump_lives_on_negative_determinants() {
        let (f, b) = reflected_bump(0.4).unwrap();
        assert!((b.detmin - 0.2).abs() < 1e-15);
        assert!(b.det_range().unwrap().1 < 0.0);
        let p = point(&[(Var::A, -1.0), (Var::D, 1.0)]);
        assert!((f.eval(&p).unwrap() - (-4.0f64).exp()).abs() < 1e-17);
    }

    #[test]
    fn derivatives_match_central_differences() {
        let (f, _) = standard_bump(0.4).unwrap();
        let h = 1e-5;
        for v in Var::MATRIX {
            let df = f.diff(v);
            for p in sample_points() {
                let (mut lo, mut hi) = (p, p);
                lo[v.index()] -= h;
                hi[v.index()] += h;
                let fd = (f.eval(&hi).unwrap() - f.eval(&lo).unwrap()) / (2.0 * h);
                let exact = df.eval(&p).unwrap();
                assert!(
                    (fd - exact).abs() <= 1e-6 * exact.abs().max(1e-3),
                    "{v:?}: {fd} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn mixed_partials_commute() {
        let (f, _) = standard_bump(0.4).unwrap();
        let f = f * SymExpr::det_inv();
        let ab = f.diff(Var::A).diff(Var::B);
        let ba = f.diff(Var::B).diff(Var::A);
        for p in sample_points() {
            let (x, y) = (ab.eval(&p).unwrap(), ba.eval(&p).unwrap());
            assert!((x - y).abs() <= 1e-10 * x.abs().max(1e-12));
        }
    }

    #[test]
    fn derivatives_vanish_at_the_seam() {
        let psi = SymExpr::bump_at(Var::X, 0.0, 0.4);
        let mut d = psi.clone();
        for k in 1..=4 {
            d = d.diff(Var::X);
            let mut prev = f64::INFINITY;
            for dist in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
                let v = d.eval(&point(&[(Var::X, 0.4 - dist)])).unwrap().abs();
                assert!(v.is_finite(), "order {k} at {dist}");
                assert!(v <= prev.max(1e-300));
                prev = v;
            }
            assert!(prev < 1e-100, "order {k}: {prev}");
        }
    }

    #[test]
    fn det_inverse_errors_on_singular_points() {
        let e = SymExpr::det_inv();
        let p = point(&[(Var::A, 1.0), (Var::B, 2.0), (Var::C, 1.0), (Var::D, 2.0)]);
        assert_eq!(e.eval(&p), Err(SymError::DetZero));
        let id = point(&[(Var::A, 1.0), (Var::D, 1.0)]);
        assert_eq!(e.eval(&id).unwrap(), 1.0);
    }

    #[test]
    fn support_soundness() {
        let (f, b) = standard_bump(0.3).unwrap();
        let outside = [
            point(&[(Var::A, 1.31), (Var::D, 1.0)]),
            point(&[(Var::A, 1.0), (Var::B, -0.35), (Var::D, 1.0)]),
            point(&[(Var::A, 1.0), (Var::D, 0.69)]),
        ];
        for p in outside {
            assert!(!b.contains(&p));
            assert_eq!(f.eval(&p).unwrap(), 0.0);
        }
    }

    #[test]
    fn substitution_then_differentiation_is_the_chain_rule() {
        // d/dt ψ(u - t v) = -v ψ'(u - t v)
        let psi = SymExpr::bump_at(Var::A, 1.0, 0.4);
        let sub = psi.subst(&[(
            Var::A,
            SymExpr::var(Var::U) - SymExpr::var(Var::T) * SymExpr::var(Var::V),
        )]);
        let lhs = sub.diff(Var::T);
        let p = point(&[(Var::U, 1.1), (Var::T, 0.3), (Var::V, 0.2)]);
        let a = 1.1 - 0.3 * 0.2;
        let rhs = -0.2 * psi.diff(Var::A).eval(&point(&[(Var::A, a)])).unwrap();
        assert!((lhs.eval(&p).unwrap() - rhs).abs() < 1e-15);
    }
}
