//! The plane model: `SL(2, ℝ)` acting on functions on `ℝ²`, its transform
//! `Jφ(u, σ, ε) = ∫ φ(t, tu) t^{-σ‖ε} dt`, the shift
//! `V F(u, σ, ε) = F(u, σ+1, ε+1)` and the four operator correspondences.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::quad::{power_signed, JTransform, QuadratureSpec};
use crate::symfunc::{standard_plane_bump, SupportBox, SymExpr, Var};
use crate::verify::{Config, VerificationCase, VerificationReport};

pub const SUITE: &str = "toy";
pub const TOY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToyPoint {
    pub u: f64,
    pub sigma: Complex64,
    pub eps: u8,
}

impl ToyPoint {
    pub fn new(u: f64, sigma: Complex64, eps: u8) -> Self {
        Self { u, sigma, eps: eps % 2 }
    }

    /// `(u, σ + k, ε + k)`.
    pub fn shifted(&self, k: i32) -> Self {
        Self::new(self.u, self.sigma + k as f64, (self.eps as i32 + k).rem_euclid(2) as u8)
    }
}

impl fmt::Display for ToyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "u={} sigma={}{:+}i eps={}",
            self.u, self.sigma.re, self.sigma.im, self.eps
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ToyGenerator {
    X,
    Y,
    Dx,
    Dy,
}

impl ToyGenerator {
    pub const ALL: [ToyGenerator; 4] = [ToyGenerator::X, ToyGenerator::Y, ToyGenerator::Dx, ToyGenerator::Dy];

    pub fn name(self) -> &'static str {
        match self {
            ToyGenerator::X => "x",
            ToyGenerator::Y => "y",
            ToyGenerator::Dx => "dx",
            ToyGenerator::Dy => "dy",
        }
    }

    /// The generator applied to `φ`.
    pub fn apply(self, phi: &SymExpr) -> SymExpr {
        match self {
            ToyGenerator::X => SymExpr::var(Var::X) * phi.clone(),
            ToyGenerator::Y => SymExpr::var(Var::Y) * phi.clone(),
            ToyGenerator::Dx => phi.diff(Var::X),
            ToyGenerator::Dy => phi.diff(Var::Y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown plane generator `{0}` (expected x, y, dx or dy)")]
pub struct UnknownToyGenerator(pub String);

impl FromStr for ToyGenerator {
    type Err = UnknownToyGenerator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ToyGenerator::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| UnknownToyGenerator(s.to_string()))
    }
}

/// `coeff · σ^sigma_pow · u^u_pow · ∂u^du · V^shift`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToyTerm {
    pub coeff: i64,
    pub sigma_pow: u32,
    pub u_pow: u32,
    pub du: u32,
    pub shift: i32,
}

impl ToyTerm {
    const fn new(coeff: i64, sigma_pow: u32, u_pow: u32, du: u32, shift: i32) -> Self {
        Self {
            coeff,
            sigma_pow,
            u_pow,
            du,
            shift,
        }
    }
}

/// A differential-difference operator on functions of `(u, σ, ε)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyOperator {
    pub terms: Vec<ToyTerm>,
}

/// A function of `(u, σ, ε)` with its `u`-derivatives: `f(n, p) = ∂u^n F(p)`.
pub type ToyFunction<'a> = dyn Fn(u32, ToyPoint) -> Complex64 + 'a;

impl ToyOperator {
    /// `∂u^n (A F)(p)`.
    pub fn apply_deriv(&self, f: &ToyFunction<'_>, n: u32, p: ToyPoint) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let q = p.shifted(t.shift);
            let c = p.sigma.powu(t.sigma_pow) * t.coeff as f64;
            // Leibniz over u^b: ∂u^n (u^b G) = Σ_r C(n,r) b!/(b-r)! u^{b-r} ∂u^{n-r} G
            let (mut binom, mut falling) = (1.0, 1.0);
            for r in 0..=n.min(t.u_pow) {
                let upow = p.u.powi((t.u_pow - r) as i32);
                total += c * (binom * falling * upow) * f(t.du + n - r, q);
                binom *= (n - r) as f64 / (r + 1) as f64;
                falling *= (t.u_pow - r) as f64;
            }
        }
        total
    }

    pub fn apply(&self, f: &ToyFunction<'_>, p: ToyPoint) -> Complex64 {
        self.apply_deriv(f, 0, p)
    }
}

impl fmt::Display for ToyOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            if t.coeff.abs() != 1 {
                factors.push(t.coeff.abs().to_string());
            }
            let pw = |name: &str, e: u32| {
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            };
            if t.sigma_pow > 0 {
                factors.push(pw("sigma", t.sigma_pow));
            }
            if t.u_pow > 0 {
                factors.push(pw("u", t.u_pow));
            }
            if t.du > 0 {
                factors.push(pw("du", t.du));
            }
            match t.shift {
                0 => {}
                1 => factors.push("V".into()),
                k => factors.push(format!("V^{k}")),
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            let sign = if t.coeff < 0 { "-" } else { "+" };
            match (i, sign) {
                (0, "+") => {}
                (0, _) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Image of a plane generator under `J`:
/// `x ↦ V⁻¹`, `y ↦ uV⁻¹`, `∂x ↦ σV - u∂uV`, `∂y ↦ ∂uV`.
pub fn toy_theta(g: ToyGenerator) -> ToyOperator {
    let terms = match g {
        ToyGenerator::X => vec![ToyTerm::new(1, 0, 0, 0, -1)],
        ToyGenerator::Y => vec![ToyTerm::new(1, 0, 1, 0, -1)],
        ToyGenerator::Dx => vec![ToyTerm::new(1, 1, 0, 0, 1), ToyTerm::new(-1, 0, 1, 1, 1)],
        ToyGenerator::Dy => vec![ToyTerm::new(1, 0, 0, 1, 1)],
    };
    ToyOperator { terms }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToyError {
    #[error("a + uc vanishes at u = {u}")]
    SingularSample { u: f64 },
    #[error("matrix determinant is {0}, expected 1")]
    NotUnimodular(f64),
}

/// Quadrature order of the one-dimensional transform for `config`.
pub fn toy_order(config: &Config) -> usize {
    (2 * config.order).max(128)
}

/// Default `(u, σ, ε)` samples for the correspondences.
pub fn toy_samples() -> Vec<ToyPoint> {
    let mut out = Vec::new();
    for u in [0.3, -0.6] {
        for sigma in [
            Complex64::new(0.2, 0.5),
            Complex64::new(-0.7, 0.3),
            Complex64::new(1.3, -0.4),
        ] {
            for eps in [0, 1] {
                out.push(ToyPoint::new(u, sigma, eps));
            }
        }
    }
    out
}

fn j_function(j: &JTransform) -> impl Fn(u32, ToyPoint) -> Complex64 + '_ {
    move |n, p| j.deriv(n, p.u, p.sigma, p.eps)
}

/// `J(gφ)(p)` against `toy_theta(g)` applied to `Jφ`, for every generator and sample.
pub fn toy_correspondences_for(
    phi: &SymExpr,
    support: &SupportBox,
    samples: &[ToyPoint],
    config: &Config,
) -> VerificationReport {
    let spec = QuadratureSpec::new(toy_order(config));
    let mut report = VerificationReport::new(config.clone());
    let base = JTransform::new(phi, support, spec);
    let jf = j_function(&base);
    for g in ToyGenerator::ALL {
        let image = JTransform::new(&g.apply(phi), support, spec);
        let op = toy_theta(g);
        for &p in samples {
            let lhs = image.value(p.u, p.sigma, p.eps);
            let rhs = op.apply(&jf, p);
            report.push(VerificationCase::numeric(
                SUITE,
                format!("J({}*phi) = [{}] J phi at {p}", g.name(), op),
                None,
                lhs,
                rhs,
                TOY_TOL,
            ));
        }
    }
    report
}

/// The four correspondences for the reference `φ = ψ_{1/2}(x-2) ψ_1(y)`.
pub fn toy_verify_correspondences(config: &Config) -> VerificationReport {
    let (phi, support) = standard_plane_bump();
    toy_correspondences_for(&phi, &support, &toy_samples(), config)
}

/// `J(T(g)φ)(u, σ, ε) = Jφ((b+ud)/(a+uc), σ, ε) (a+uc)^{-1+σ‖ε}` with
/// `T(g)φ(x, y) = φ(ax + cy, bx + dy)` and `g = [[a, b], [c, d]]`.
pub fn toy_intertwining_at(
    g: [[f64; 2]; 2],
    phi: &SymExpr,
    support: &SupportBox,
    samples: &[ToyPoint],
    config: &Config,
) -> Result<VerificationReport, ToyError> {
    let [[a, b], [c, d]] = g;
    let det = a * d - b * c;
    if (det - 1.0).abs() > 1e-12 {
        return Err(ToyError::NotUnimodular(det));
    }
    let spec = QuadratureSpec::new(toy_order(config));
    let (x, y) = (SymExpr::var(Var::X), SymExpr::var(Var::Y));
    let moved = phi.subst(&[(Var::X, x.scale(a) + y.scale(c)), (Var::Y, x.scale(b) + y.scale(d))]);
    let base = JTransform::new(phi, support, spec);
    let xrange = support.interval(Var::X);
    let mut report = VerificationReport::new(config.clone());
    for &p in samples {
        let q = a + p.u * c;
        let factor = power_signed(q, p.sigma - 1.0, p.eps).map_err(|_| ToyError::SingularSample { u: p.u })?;
        // φ(tq, t(b+ud)) is supported where tq lies in the x-interval of φ
        let range = xrange.map(|(lo, hi)| {
            let (l, h) = (lo / q, hi / q);
            (l.min(h), l.max(h))
        });
        let lhs = JTransform::with_range(&moved, range, spec).value(p.u, p.sigma, p.eps);
        let rhs = base.value((b + p.u * d) / q, p.sigma, p.eps) * factor;
        report.push(VerificationCase::numeric(
            SUITE,
            format!("J(T(g)phi) = R(g) J phi, g = [[{a}, {b}], [{c}, {d}]], at {p}"),
            None,
            lhs,
            rhs,
            TOY_TOL,
        ));
    }
    Ok(report)
}

/// Default samples for the intertwining check.
pub fn toy_intertwining_samples() -> Vec<ToyPoint> {
    let mut out = Vec::new();
    for u in [0.3, -0.6, 0.9] {
        for sigma in [Complex64::new(0.2, 0.5), Complex64::new(-0.7, 0.3)] {
            for eps in [0, 1] {
                out.push(ToyPoint::new(u, sigma, eps));
            }
        }
    }
    out
}

/// Intertwining check at the default samples for the reference `φ`.
pub fn toy_intertwining_check(g: [[f64; 2]; 2], config: &Config) -> Result<VerificationReport, ToyError> {
    let (phi, support) = standard_plane_bump();
    toy_intertwining_at(g, &phi, &support, &toy_intertwining_samples(), config)
}

/// `[A, B] = expected` on `Jφ`, applying both orders numerically.
pub fn toy_commutator_case(
    a: ToyGenerator,
    b: ToyGenerator,
    expected: i64,
    j: &JTransform,
    p: ToyPoint,
) -> VerificationCase {
    let (ta, tb) = (toy_theta(a), toy_theta(b));
    let jf = j_function(j);
    let after_b = |n: u32, q: ToyPoint| tb.apply_deriv(&jf, n, q);
    let after_a = |n: u32, q: ToyPoint| ta.apply_deriv(&jf, n, q);
    let ab = ta.apply(&after_b, p);
    let ba = tb.apply(&after_a, p);
    let lhs = j.value(p.u, p.sigma, p.eps) * expected as f64;
    let label = format!("[{}, {}] = {expected} at {p}", a.name(), b.name());
    VerificationCase::numeric(SUITE, label, None, lhs, ab - ba, TOY_TOL)
}

/// Canonical commutation relations of the plane generators, checked on `Jφ`.
pub fn toy_commutation_checks(config: &Config) -> VerificationReport {
    use ToyGenerator::*;
    let (phi, support) = standard_plane_bump();
    let j = JTransform::new(&phi, &support, QuadratureSpec::new(toy_order(config)));
    let mut report = VerificationReport::new(config.clone());
    let pairs = [(Dx, X, 1), (Dy, Y, 1), (Dx, Y, 0), (Dy, X, 0), (X, Y, 0), (Dx, Dy, 0)];
    for p in toy_samples().into_iter().step_by(3) {
        for (a, b, e) in pairs {
            report.push(toy_commutator_case(a, b, e, &j, p));
        }
    }
    report
}

/// `Jφ` does not depend on `ε` when `φ` is supported in `x > 0`.
pub fn toy_parity_independence(config: &Config) -> VerificationReport {
    let (phi, support) = standard_plane_bump();
    let j = JTransform::new(&phi, &support, QuadratureSpec::new(toy_order(config)));
    let mut report = VerificationReport::new(config.clone());
    for p in toy_samples().into_iter().filter(|p| p.eps == 0) {
        let a = j.value(p.u, p.sigma, 0);
        let b = j.value(p.u, p.sigma, 1);
        report.push(VerificationCase::numeric(
            SUITE,
            format!("J phi independent of eps at {p}"),
            None,
            a,
            b,
            0.0,
        ));
    }
    report
}

/// Matrices used by the default intertwining suite.
pub fn toy_default_matrices() -> Vec<(&'static str, [[f64; 2]; 2])> {
    vec![
        ("identity", [[1.0, 0.0], [0.0, 1.0]]),
        ("diag(2, 1/2)", [[2.0, 0.0], [0.0, 0.5]]),
        ("shear", [[1.0, 1.0], [0.0, 1.0]]),
        ("lower shear", [[1.0, 0.0], [0.5, 1.0]]),
        ("rotation", [[0.0, -1.0], [1.0, 0.0]]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn operator_display() {
        assert_eq!(toy_theta(ToyGenerator::X).to_string(), "V^-1");
        assert_eq!(toy_theta(ToyGenerator::Y).to_string(), "u*V^-1");
        assert_eq!(toy_theta(ToyGenerator::Dx).to_string(), "sigma*V - u*du*V");
        assert_eq!(toy_theta(ToyGenerator::Dy).to_string(), "du*V");
        assert_eq!("dy".parse::<ToyGenerator>(), Ok(ToyGenerator::Dy));
        assert!("dz".parse::<ToyGenerator>().is_err());
    }

    #[test]
    fn correspondences_hold() {
        let r = toy_verify_correspondences(&cfg());
        assert_eq!(r.cases.len(), 48);
        assert!(r.all_pass(), "{}", r.to_text());
        assert!(r.max_residual() < 1e-10, "{}", r.max_residual());
        let at = toy_correspondences_for(
            &standard_plane_bump().0,
            &standard_plane_bump().1,
            &[ToyPoint::new(0.3, Complex64::new(0.2, 0.5), 0)],
            &cfg(),
        );
        assert!(at.cases.iter().all(|c| c.rel_err.unwrap() <= 1e-8));
    }

    #[test]
    fn zero_function_gives_zero_residuals() {
        let (_, support) = standard_plane_bump();
        let r = toy_correspondences_for(&SymExpr::zero(), &support, &toy_samples()[..2], &cfg());
        assert!(r.cases.iter().all(|c| c.abs_err == Some(0.0)));
    }

    #[test]
    fn transform_is_linear() {
        let (phi, support) = standard_plane_bump();
        let spec = QuadratureSpec::new(128);
        let p = ToyPoint::new(0.3, Complex64::new(0.2, 0.5), 1);
        let j1 = JTransform::new(&phi, &support, spec).value(p.u, p.sigma, p.eps);
        let j3 = JTransform::new(&phi.scale(3.0), &support, spec).value(p.u, p.sigma, p.eps);
        assert!((j3 - j1 * 3.0).norm() <= 1e-14 * j1.norm());
    }

    #[test]
    fn u_du_image_of_dy_fails() {
        // u du V in place of du V
        let (phi, support) = standard_plane_bump();
        let spec = QuadratureSpec::new(128);
        let j = JTransform::new(&phi, &support, spec);
        let jdy = JTransform::new(&phi.diff(Var::Y), &support, spec);
        let wrong = ToyOperator {
            terms: vec![ToyTerm::new(1, 0, 1, 1, 1)],
        };
        let p = ToyPoint::new(0.3, Complex64::new(0.2, 0.5), 0);
        let lhs = jdy.value(p.u, p.sigma, p.eps);
        let rhs = wrong.apply(&j_function(&j), p);
        assert!((lhs - rhs).norm() > 0.1 * lhs.norm());
    }

    #[test]
    fn intertwining_holds() {
        for (name, g) in toy_default_matrices() {
            let r = toy_intertwining_check(g, &cfg()).unwrap();
            assert!(r.all_pass(), "{name}: {}", r.to_text());
            if name == "identity" {
                assert!(r.cases.iter().all(|c| c.abs_err == Some(0.0)));
            }
        }
    }

    #[test]
    fn intertwining_errors() {
        let (phi, support) = standard_plane_bump();
        let p = [ToyPoint::new(0.5, Complex64::new(0.2, 0.5), 0)];
        let g = [[1.0, 0.0], [-2.0, 1.0]];
        assert_eq!(
            toy_intertwining_at(g, &phi, &support, &p, &cfg()).unwrap_err(),
            ToyError::SingularSample { u: 0.5 }
        );
        assert!(matches!(
            toy_intertwining_check([[1.0, 1.0], [1.0, 1.0]], &cfg()),
            Err(ToyError::NotUnimodular(_))
        ));
    }

    #[test]
    fn commutation_and_parity() {
        let r = toy_commutation_checks(&cfg());
        assert!(r.all_pass(), "{}", r.to_text());
        assert!(toy_parity_independence(&cfg()).all_pass());
    }

    #[test]
    fn shift_flips_parity() {
        let p = ToyPoint::new(0.1, Complex64::new(0.5, 0.0), 1);
        assert_eq!(p.shifted(-1).eps, 0);
        assert_eq!(p.shifted(2).eps, 1);
        assert_eq!(p.shifted(1).sigma, Complex64::new(1.5, 0.0));
    }
}
