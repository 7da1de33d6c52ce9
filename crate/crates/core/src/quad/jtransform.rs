use num_complex::Complex64;

use super::{gauss_legendre, power_signed, QuadratureSpec};
use crate::symfunc::{Point, SupportBox, SymExpr, Tape, Var};

/// The plane transform `Jφ(u, σ, ε) = ∫ φ(t, tu) t^{-σ‖ε} dt` for one `φ`,
/// integrated over an interval of `t` containing the support.
pub struct JTransform {
    /// `∂y^n φ` for `n = 0..=MAX_DERIV`.
    tapes: Vec<Tape>,
    range: Option<(f64, f64)>,
    order: usize,
}

impl JTransform {
    pub const MAX_DERIV: u32 = 3;

    /// Integrates over the `x`-interval of `support`.
    pub fn new(phi: &SymExpr, support: &SupportBox, spec: QuadratureSpec) -> Self {
        Self::with_range(phi, support.interval(Var::X), spec)
    }

    pub fn with_range(phi: &SymExpr, range: Option<(f64, f64)>, spec: QuadratureSpec) -> Self {
        let mut tapes = Vec::new();
        let mut e = phi.clone();
        for _ in 0..=Self::MAX_DERIV {
            tapes.push(e.compile());
            e = e.diff(Var::Y);
        }
        Self {
            tapes,
            range,
            order: spec.order,
        }
    }

    /// `∂u^n Jφ(u, σ, ε) = ∫ t^n (∂y^n φ)(t, tu) t^{-σ‖ε} dt`.
    ///
    /// # Panics
    /// If `n > MAX_DERIV`.
    pub fn deriv(&self, n: u32, u: f64, sigma: Complex64, eps: u8) -> Complex64 {
        let tape = &self.tapes[n as usize];
        let Some((lo, hi)) = self.range else {
            return Complex64::new(0.0, 0.0);
        };
        let (nodes, weights) = gauss_legendre(self.order).on(lo, hi);
        let mut scratch = tape.scratch();
        let mut p: Point = [0.0; Var::COUNT];
        let mut total = Complex64::new(0.0, 0.0);
        for (&t, &w) in nodes.iter().zip(&weights) {
            p[Var::X.index()] = t;
            p[Var::Y.index()] = t * u;
            let v = tape.eval_with(&p, &mut scratch).unwrap_or(0.0);
            if v == 0.0 {
                continue;
            }
            if let Ok(k) = power_signed(t, -sigma, eps) {
                total += k * (v * w * t.powi(n as i32));
            }
        }
        total
    }

    pub fn value(&self, u: f64, sigma: Complex64, eps: u8) -> Complex64 {
        self.deriv(0, u, sigma, eps)
    }

    pub fn du(&self, u: f64, sigma: Complex64, eps: u8) -> Complex64 {
        self.deriv(1, u, sigma, eps)
    }
}

pub fn j_transform(
    phi: &SymExpr,
    support: &SupportBox,
    u: f64,
    sigma: Complex64,
    eps: u8,
    spec: QuadratureSpec,
) -> Complex64 {
    JTransform::new(phi, support, spec).value(u, sigma, eps)
}

pub fn j_transform_du(
    phi: &SymExpr,
    support: &SupportBox,
    u: f64,
    sigma: Complex64,
    eps: u8,
    spec: QuadratureSpec,
) -> Complex64 {
    JTransform::new(phi, support, spec).du(u, sigma, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::standard_plane_bump;

    #[test]
    fn zero_and_parity() {
        let (phi, b) = standard_plane_bump();
        let spec = QuadratureSpec::new(64);
        let s = Complex64::new(0.2, 0.5);
        assert_eq!(
            j_transform(&SymExpr::zero(), &b, 0.3, s, 0, spec),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            j_transform(&phi, &b, 0.3, s, 0, spec),
            j_transform(&phi, &b, 0.3, s, 1, spec)
        );
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (phi, b) = standard_plane_bump();
        let j = JTransform::new(&phi, &b, QuadratureSpec::new(128));
        let s = Complex64::new(0.2, 0.5);
        let h = 1e-5;
        let fd = (j.value(0.3 + h, s, 0) - j.value(0.3 - h, s, 0)) / (2.0 * h);
        let d = j.du(0.3, s, 0);
        assert!((fd - d).norm() < 1e-7 * d.norm());
    }

    #[test]
    fn reference_value() {
        let (phi, b) = standard_plane_bump();
        let v = j_transform(&phi, &b, 0.0, Complex64::new(0.0, 0.4), 0, QuadratureSpec::new(128));
        let expect = Complex64::new(REF_RE, REF_IM);
        assert!((v - expect).norm() < 1e-10 * expect.norm(), "{v}");
    }

    const REF_RE: f64 = 0.078_530_417_389_345_74;
    const REF_IM: f64 = -0.022_179_564_167_906_83;
}
