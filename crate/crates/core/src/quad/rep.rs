use num_complex::Complex64;

use super::{gauss_legendre, power_signed, KernelEvaluator, KernelPoint, QuadratureSpec};
use crate::fourier::ParamPoint;
use crate::symfunc::{Point, SupportBox, SymExpr, Var};

/// Orders and test function for [`rep_action_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepActionSpec {
    /// Points per axis of the 4-D group integral.
    pub group_order: usize,
    /// Points per axis of each kernel evaluation.
    pub kernel_order: usize,
    /// Points of the outer `s`-integral.
    pub s_order: usize,
    /// `f = ψ_r(s)` on the line.
    pub f_radius: f64,
}

impl Default for RepActionSpec {
    fn default() -> Self {
        Self {
            group_order: 24,
            kernel_order: 48,
            s_order: 64,
            f_radius: 0.5,
        }
    }
}

/// Both sides of `T(F) f(t) = ∫ K_F(t, s) f(s) ds` for `f = ψ_r`.
///
/// The left side integrates the group action directly,
/// `∫ F(g) f((b+td)/(a+tc)) (a+tc)^{-1+μ1-μ2‖ε1-ε2} Δ^{1/2+μ2‖ε2} Δ^{-2} dg`;
/// the right side integrates the kernel against `f`.
pub fn rep_action_check(
    f: &SymExpr,
    support: &SupportBox,
    t: f64,
    params: ParamPoint,
    spec: RepActionSpec,
) -> (Complex64, Complex64) {
    let r = spec.f_radius;
    let test = SymExpr::bump(r, SymExpr::var(Var::S)).compile();
    let mut scratch = test.scratch();
    let mut fval = |s: f64| {
        let mut p: Point = [0.0; Var::COUNT];
        p[Var::S.index()] = s;
        test.eval_with(&p, &mut scratch).unwrap_or(0.0)
    };

    let mut lhs = Complex64::new(0.0, 0.0);
    let intervals = [Var::A, Var::B, Var::C, Var::D].map(|v| support.interval(v));
    if let [Some(ia), Some(ib), Some(ic), Some(id)] = intervals {
        let rule = gauss_legendre(spec.group_order);
        let [(a, wa), (b, wb), (c, wc), (d, wd)] = [ia, ib, ic, id].map(|(lo, hi)| rule.on(lo, hi));
        let tape = f.compile();
        let mut fs = tape.scratch();
        let mut p: Point = [0.0; Var::COUNT];
        let e12 = (params.eps1 + 2 - params.eps2) % 2;
        let alpha = params.m1 - params.m2 - 1.0;
        let beta = params.m2 + 0.5;
        for i in 0..a.len() {
            p[Var::A.index()] = a[i];
            for j in 0..b.len() {
                p[Var::B.index()] = b[j];
                for k in 0..c.len() {
                    p[Var::C.index()] = c[k];
                    let q = a[i] + t * c[k];
                    for l in 0..d.len() {
                        p[Var::D.index()] = d[l];
                        let fg = tape.eval_with(&p, &mut fs).unwrap_or(0.0);
                        if fg == 0.0 || q == 0.0 {
                            continue;
                        }
                        let fx = fval((b[j] + t * d[l]) / q);
                        if fx == 0.0 {
                            continue;
                        }
                        let det = a[i] * d[l] - b[j] * c[k];
                        let (Ok(pq), Ok(pd)) = (power_signed(q, alpha, e12), power_signed(det, beta, params.eps2))
                        else {
                            continue;
                        };
                        lhs += pq * pd * (fg * fx / (det * det) * wa[i] * wb[j] * wc[k] * wd[l]);
                    }
                }
            }
        }
    }

    let mut kernel = KernelEvaluator::new(f, support, QuadratureSpec::new(spec.kernel_order));
    let (s, ws) = gauss_legendre(spec.s_order).on(-r, r);
    let mut rhs = Complex64::new(0.0, 0.0);
    for (&si, &wi) in s.iter().zip(&ws) {
        let fs = fval(si);
        if fs != 0.0 {
            rhs += kernel.kernel(&KernelPoint::new(t, si, params)) * (fs * wi);
        }
    }
    (lhs, rhs)
}
