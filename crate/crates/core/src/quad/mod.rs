//! Numerical engine: Gauss–Legendre tensor quadrature for the kernel `K_F`,
//! its `(t, s)`-derivatives, parameter shifts, the end-to-end check of the
//! transform, and the one-dimensional transform of the plane model.

mod gauss;
mod jtransform;
mod kernel;
mod polytope;
mod rep;

use num_complex::Complex64;
use thiserror::Error;

use crate::symfunc::{interval_mul, SupportBox, Var};

pub use crate::fourier::ParamPoint;
pub use gauss::{gauss_legendre, GaussRule};
pub use jtransform::{j_transform, j_transform_du, JTransform};
pub use kernel::{apply_fourier_operator, eval_kernel, eval_kernel_deriv, KernelEvaluator};
pub use rep::{rep_action_check, RepActionSpec};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("signed power of zero")]
pub struct ZeroBase;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("integration box is empty; the kernel vanishes at this point")]
pub struct EmptyBox;

/// `x^{μ‖ε} = |x|^μ sgn(x)^ε`.
pub fn power_signed(x: f64, mu: Complex64, eps: u8) -> Result<Complex64, ZeroBase> {
    if x == 0.0 {
        return Err(ZeroBase);
    }
    let m = (mu * x.abs().ln()).exp();
    Ok(if x < 0.0 && eps % 2 == 1 { -m } else { m })
}

/// Integration variables for the kernel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KernelCoords {
    /// Integrate over the support box in `(a, c, d)`, with `u = a + tc`,
    /// `v = c`, `w = d - sc` (unit Jacobian) and `b = sa + stc - td`. The
    /// `a`, `c`, `d` bump factors are aligned with the nodes; the limits of
    /// the inner variable and of `c` are cut exactly to the `b`-slab.
    #[default]
    Sheared,
    /// Integrate over the `(u, v, w)` box from [`kernel_bounds`].
    Box,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Points per axis.
    pub order: usize,
    pub coords: KernelCoords,
}

impl QuadratureSpec {
    pub const MIN_ORDER: usize = 8;

    pub fn new(order: usize) -> Self {
        Self {
            order: order.max(Self::MIN_ORDER),
            coords: KernelCoords::Sheared,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::new(64)
    }
}

/// Arguments `(t, s | μ1, ε1; μ2, ε2)` of the kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelPoint {
    pub t: f64,
    pub s: f64,
    pub params: ParamPoint,
}

impl KernelPoint {
    pub fn new(t: f64, s: f64, params: ParamPoint) -> Self {
        Self { t, s, params }
    }
}

/// Integration box in `(u, v, w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelBox {
    pub u: (f64, f64),
    pub v: (f64, f64),
    pub w: (f64, f64),
}

fn interval_scale(x: (f64, f64), k: f64) -> (f64, f64) {
    if k >= 0.0 {
        (k * x.0, k * x.1)
    } else {
        (k * x.1, k * x.0)
    }
}

fn interval_add(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    (x.0 + y.0, x.1 + y.1)
}

/// Clips `x` to `|x| ≥ m` when `x` has one sign.
fn clip_away_from_zero(x: (f64, f64), m: f64) -> (f64, f64) {
    if x.0 >= 0.0 {
        (x.0.max(m), x.1)
    } else if x.1 <= 0.0 {
        (x.0, x.1.min(-m))
    } else {
        x
    }
}

/// Box in `(u, v, w)` containing the support of
/// `F(u - tv, su - stv - tw, v, sv + w)`.
///
/// `u = a + tc`, `v = c`, `w = d - sc` give the first enclosure; since the
/// substituted matrix has determinant `uw`, `|u| ≥ detmin / max|w|` and
/// `|w| ≥ detmin / max|u|` then clip it.
pub fn kernel_bounds(support: &SupportBox, t: f64, s: f64) -> Result<KernelBox, EmptyBox> {
    let get = |v| support.interval(v).ok_or(EmptyBox);
    let (a, c, d) = (get(Var::A)?, get(Var::C)?, get(Var::D)?);
    let v = c;
    let mut u = interval_add(a, interval_scale(c, t));
    let mut w = interval_add(d, interval_scale(c, -s));
    if support.detmin > 0.0 {
        let umax = u.0.abs().max(u.1.abs());
        let wmax = w.0.abs().max(w.1.abs());
        u = clip_away_from_zero(u, support.detmin / wmax);
        w = clip_away_from_zero(w, support.detmin / umax);
    }
    if u.0 > u.1 || w.0 > w.1 || v.0 > v.1 {
        return Err(EmptyBox);
    }
    Ok(KernelBox { u, v, w })
}

/// Whether `b = sa - td + stc` can meet the `b`-interval of the support
/// for `(a, c, d)` in the support box; when it cannot, `K_F(t, s) = 0`.
pub fn kernel_reachable(support: &SupportBox, t: f64, s: f64) -> bool {
    let get = |v| support.interval(v);
    match (get(Var::A), get(Var::B), get(Var::C), get(Var::D)) {
        (Some(a), Some(b), Some(c), Some(d)) => {
            let range = interval_add(
                interval_add(interval_scale(a, s), interval_scale(d, -t)),
                interval_mul(c, (s * t, s * t)),
            );
            range.0 <= b.1 && range.1 >= b.0
        }
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::standard_bump;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn signed_powers() {
        let c = |re, im| Complex64::new(re, im);
        assert!(close(power_signed(-1.0, c(0.0, 0.0), 1).unwrap(), c(-1.0, 0.0)));
        assert!(close(power_signed(-1.0, c(0.0, 0.0), 0).unwrap(), c(1.0, 0.0)));
        assert!(close(power_signed(4.0, c(0.5, 0.0), 0).unwrap(), c(2.0, 0.0)));
        let l2 = 2f64.ln();
        assert!(close(power_signed(2.0, c(0.0, 1.0), 0).unwrap(), c(l2.cos(), l2.sin())));
        assert_eq!(power_signed(0.0, c(1.0, 0.0), 0), Err(ZeroBase));
    }

    #[test]
    fn bounds_at_origin() {
        let (_, b) = standard_bump(0.4).unwrap();
        let k = kernel_bounds(&b, 0.0, 0.0).unwrap();
        assert!((k.u.0 - 0.6).abs() < 1e-15 && (k.u.1 - 1.4).abs() < 1e-15);
        assert!((k.w.0 - 0.6).abs() < 1e-15 && (k.w.1 - 1.4).abs() < 1e-15);
        assert_eq!(k.v, (-0.4, 0.4));
    }

    #[test]
    fn bounds_clip_with_the_determinant() {
        let (_, b) = standard_bump(0.4).unwrap();
        let k = kernel_bounds(&b, 1.0, 0.0).unwrap();
        assert!((k.u.0 - 0.2).abs() < 1e-15 && (k.u.1 - 1.8).abs() < 1e-15);
        let clipped = kernel_bounds(
            &SupportBox::new(vec![
                (Var::A, 0.1, 1.0),
                (Var::B, -1.0, -0.9),
                (Var::C, 0.9, 1.0),
                (Var::D, 0.1, 1.0),
            ]),
            0.0,
            0.0,
        )
        .unwrap();
        assert!((clipped.u.0 - 0.82).abs() < 1e-12 && (clipped.w.0 - 0.82).abs() < 1e-12);
    }

    #[test]
    fn empty_box() {
        let b = SupportBox::new(vec![
            (Var::A, 0.6, 1.4),
            (Var::B, -0.4, 0.4),
            (Var::C, 0.5, 0.4),
            (Var::D, 0.6, 1.4),
        ]);
        assert_eq!(kernel_bounds(&b, 0.0, 0.0), Err(EmptyBox));
    }

    #[test]
    fn reachability() {
        let (_, b) = standard_bump(0.4).unwrap();
        assert!(kernel_reachable(&b, 0.2, 0.2));
        assert!(kernel_reachable(&b, 0.0, 0.0));
        assert!(!kernel_reachable(&b, -0.8, 0.7));
    }
}
