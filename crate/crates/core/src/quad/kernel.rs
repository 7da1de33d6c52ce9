use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::polytope::{Polytope, Slab};
use super::{gauss_legendre, kernel_bounds, KernelCoords, KernelPoint, QuadratureSpec};
use crate::coeffs::PoleError;
use crate::fourier::FourierOperator;
use crate::symfunc::{Point, SupportBox, SymExpr, Tape, Var};

/// μ-independent part of the kernel integrand with weights included, on
/// nodes `(i, j, k)` of an iterated rule. The kernel is
/// `Σ_ij P[i, j]^{α_p} Σ_k g[i, j, k] Q[i, j, k]^{α_q}`, where `P` and `Q`
/// are `u` and `w` in some order; bases are stored as `(ln|x|, sgn x < 0)`.
struct Grid {
    n: usize,
    /// Whether `P` is `w` (and `Q` is `u`).
    swapped: bool,
    p: Vec<(f64, bool)>,
    q: Vec<(f64, bool)>,
    g: Vec<f64>,
    state: GridState,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum GridState {
    Ready,
    Zero,
}

fn log_base(x: f64) -> (f64, bool) {
    (x.abs().ln(), x < 0.0)
}

/// `x^{α‖ε}` from `(ln|x|, sgn x < 0)`.
fn pow_from_log((l, neg): (f64, bool), a: Complex64, eps: u8) -> Complex64 {
    let m = (a * l).exp();
    if neg && eps % 2 == 1 {
        -m
    } else {
        m
    }
}

impl Grid {
    fn zero() -> Self {
        Self {
            n: 0,
            swapped: false,
            p: Vec::new(),
            q: Vec::new(),
            g: Vec::new(),
            state: GridState::Zero,
        }
    }

    fn integrate(&self, a1: Complex64, e1: u8, a2: Complex64, e2: u8) -> Complex64 {
        if self.state == GridState::Zero {
            return Complex64::new(0.0, 0.0);
        }
        let ((ap, ep), (aq, eq)) = if self.swapped {
            ((a2, e2), (a1, e1))
        } else {
            ((a1, e1), (a2, e2))
        };
        let n = self.n;
        let mut total = Complex64::new(0.0, 0.0);
        for ij in 0..n * n {
            let row = &self.g[ij * n..(ij + 1) * n];
            let qrow = &self.q[ij * n..(ij + 1) * n];
            let mut inner = Complex64::new(0.0, 0.0);
            for (&g, &q) in row.iter().zip(qrow) {
                if g != 0.0 {
                    inner += pow_from_log(q, aq, eq) * g;
                }
            }
            if inner != Complex64::new(0.0, 0.0) {
                total += pow_from_log(self.p[ij], ap, ep) * inner;
            }
        }
        total
    }
}

/// Integration variables `(x0, x1, x2)` and their map to `(u, v, w)`.
struct Layout {
    region: Polytope,
    kind: LayoutKind,
    t: f64,
    s: f64,
    /// The outer base is `w` and the inner one `u`.
    swapped: bool,
    /// The region is the support box itself: no `b`-limit cuts it.
    product: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LayoutKind {
    /// `(a, c, d)`: `u = a + tc`, `v = c`, `w = d - sc`.
    Acd,
    /// `(d, c, a)`, same map.
    Dca,
    /// `(u, v, w)` directly.
    Uvw,
}

impl Layout {
    fn new(support: &SupportBox, t: f64, s: f64, coords: KernelCoords) -> Option<Self> {
        let slab = |n, (lo, hi): (f64, f64)| Slab { n, lo, hi };
        if coords == KernelCoords::Box {
            let b = kernel_bounds(support, t, s).ok()?;
            let region = Polytope::new(vec![
                slab([1.0, 0.0, 0.0], b.u),
                slab([0.0, 1.0, 0.0], b.v),
                slab([0.0, 0.0, 1.0], b.w),
            ]);
            return Some(Self {
                region,
                kind: LayoutKind::Uvw,
                t,
                s,
                swapped: false,
                product: false,
            });
        }
        let get = |v| support.interval(v);
        let (a, b, c, d) = (get(Var::A)?, get(Var::B)?, get(Var::C)?, get(Var::D)?);
        // b = s a + st c - t d; the innermost variable carries the larger b-coefficient
        let (ca, cd) = (s * (a.1 - a.0), t * (d.1 - d.0));
        let (kind, outer, inner, coef) = if ca.abs() > cd.abs() {
            (LayoutKind::Dca, d, a, [-t, s * t, s])
        } else {
            (LayoutKind::Acd, a, d, [s, s * t, -t])
        };
        let mut slabs = vec![
            slab([1.0, 0.0, 0.0], outer),
            slab([0.0, 1.0, 0.0], c),
            slab([0.0, 0.0, 1.0], inner),
        ];
        let reach = |pick: fn(f64, f64) -> f64| -> f64 {
            [outer, c, inner]
                .iter()
                .zip(coef)
                .map(|(&(lo, hi), k)| pick(k * lo, k * hi))
                .sum()
        };
        let product = reach(f64::min) >= b.0 && reach(f64::max) <= b.1;
        if !product {
            slabs.push(slab(coef, b));
        }
        Some(Self {
            region: Polytope::new(slabs),
            kind,
            t,
            s,
            swapped: kind == LayoutKind::Dca,
            product,
        })
    }

    /// Base depending on `(x0, x1)` only.
    fn outer_base(&self, x0: f64, x1: f64) -> f64 {
        match self.kind {
            LayoutKind::Acd => x0 + self.t * x1,
            LayoutKind::Dca => x0 - self.s * x1,
            LayoutKind::Uvw => x0,
        }
    }

    /// `(u, v, w)` and the base depending on all three variables.
    fn point(&self, x0: f64, x1: f64, x2: f64) -> ([f64; 3], f64) {
        match self.kind {
            LayoutKind::Acd => {
                let w = x2 - self.s * x1;
                ([x0 + self.t * x1, x1, w], w)
            }
            LayoutKind::Dca => {
                let u = x2 + self.t * x1;
                ([u, x1, x0 - self.s * x1], u)
            }
            LayoutKind::Uvw => ([x0, x1, x2], x2),
        }
    }
}

/// `tanh` span of the sheared layouts, whose integrands vanish to infinite
/// order at every limit.
/// `tanh` span for product regions, whose integrands vanish to infinite
/// order at every limit. Regions cut by the `b`-limit use plain nodes.
const TANH_SPAN: f64 = 3.0;

/// Node multiplier for regions cut by the `b`-limit.
const CUT_FACTOR: (usize, usize) = (3, 2);

type GridKey = (u64, u64, u32, u32);

/// Kernel values `∂t^p ∂s^q K_F(t, s | μ, ε)` for one test function.
///
/// The integrand of `K_F` in `(u, v, w)` is
/// `F(u - tv, su - stv - tw, v, sv + w) · u^{-3/2+μ1‖ε1} · w^{-3/2+μ2‖ε2}`;
/// only the first factor depends on `(t, s)`, so derivatives act on it
/// alone and are formed symbolically. For fixed `(t, s, p, q)` that factor
/// is tabulated once and reused for every `μ`.
///
/// A support box that does not bound every matrix entry gives zero.
pub struct KernelEvaluator {
    composite: SymExpr,
    support: SupportBox,
    spec: QuadratureSpec,
    tapes: Vec<((u32, u32), Arc<Tape>)>,
    grids: Vec<(GridKey, Arc<Grid>)>,
    values: HashMap<ValueKey, Complex64>,
}

type ValueKey = (GridKey, [u64; 4], u8, u8);

const GRID_CACHE: usize = 12;

impl KernelEvaluator {
    pub fn new(f: &SymExpr, support: &SupportBox, spec: QuadratureSpec) -> Self {
        let (t, s) = (SymExpr::var(Var::T), SymExpr::var(Var::S));
        let (u, v, w) = (SymExpr::var(Var::U), SymExpr::var(Var::V), SymExpr::var(Var::W));
        let composite = f.subst(&[
            (Var::A, &u - &(&t * &v)),
            (
                Var::B,
                SymExpr::sum([
                    &s * &u,
                    -(SymExpr::product([s.clone(), t.clone(), v.clone()])),
                    -(&t * &w),
                ]),
            ),
            (Var::C, v.clone()),
            (Var::D, &(&s * &v) + &w),
        ]);
        Self {
            composite,
            support: support.clone(),
            spec,
            tapes: Vec::new(),
            grids: Vec::new(),
            values: HashMap::new(),
        }
    }

    pub fn spec(&self) -> QuadratureSpec {
        self.spec
    }

    /// Drops the tabulated grids; compiled derivatives are kept.
    pub fn clear_cache(&mut self) {
        self.grids.clear();
        self.values.clear();
    }

    fn tape(&mut self, p: u32, q: u32) -> Arc<Tape> {
        if let Some((_, t)) = self.tapes.iter().find(|(k, _)| *k == (p, q)) {
            return t.clone();
        }
        let mut e = self.composite.clone();
        for _ in 0..p {
            e = e.diff(Var::T);
        }
        for _ in 0..q {
            e = e.diff(Var::S);
        }
        let tape = Arc::new(e.compile());
        self.tapes.push(((p, q), tape.clone()));
        tape
    }

    fn grid(&mut self, t: f64, s: f64, p: u32, q: u32) -> Arc<Grid> {
        let key = (t.to_bits(), s.to_bits(), p, q);
        if let Some((_, g)) = self.grids.iter().find(|(k, _)| *k == key) {
            return g.clone();
        }
        let grid = Arc::new(self.build_grid(t, s, p, q));
        if self.grids.len() >= GRID_CACHE {
            self.grids.remove(0);
        }
        self.grids.push((key, grid.clone()));
        grid
    }

    fn build_grid(&mut self, t: f64, s: f64, p: u32, q: u32) -> Grid {
        let Some(layout) = Layout::new(&self.support, t, s, self.spec.coords) else {
            return Grid::zero();
        };
        let n = if layout.product {
            self.spec.order
        } else {
            self.spec.order * CUT_FACTOR.0 / CUT_FACTOR.1
        };
        let rule = gauss_legendre(n);
        let Some((lo0, hi0)) = layout.region.extent(&[]) else {
            return Grid::zero();
        };
        let on = |lo, hi| {
            if layout.product {
                rule.on_tanh(lo, hi, TANH_SPAN)
            } else {
                rule.on(lo, hi)
            }
        };
        let tape = self.tape(p, q);
        let mut scratch = tape.scratch();
        let mut pt: Point = [0.0; Var::COUNT];
        pt[Var::T.index()] = t;
        pt[Var::S.index()] = s;
        let zero_base = (f64::NEG_INFINITY, false);
        let mut pbase = vec![zero_base; n * n];
        let mut qbase = vec![zero_base; n * n * n];
        let mut g = vec![0.0; n * n * n];
        let mut nonzero = false;
        let (x0, w0) = on(lo0, hi0);
        for i in 0..n {
            let Some((lo1, hi1)) = layout.region.extent(&[x0[i]]) else {
                continue;
            };
            let (x1, w1) = on(lo1, hi1);
            for j in 0..n {
                let Some((lo2, hi2)) = layout.region.extent(&[x0[i], x1[j]]) else {
                    continue;
                };
                let (x2, w2) = on(lo2, hi2);
                let ij = i * n + j;
                let outer = layout.outer_base(x0[i], x1[j]);
                if outer == 0.0 {
                    continue;
                }
                pbase[ij] = log_base(outer);
                for k in 0..n {
                    let (uvw, inner) = layout.point(x0[i], x1[j], x2[k]);
                    if inner == 0.0 {
                        continue;
                    }
                    pt[Var::U.index()] = uvw[0];
                    pt[Var::V.index()] = uvw[1];
                    pt[Var::W.index()] = uvw[2];
                    let val = tape.eval_with(&pt, &mut scratch).unwrap_or(0.0);
                    if val != 0.0 {
                        nonzero = true;
                        g[ij * n + k] = val * w0[i] * w1[j] * w2[k];
                        qbase[ij * n + k] = log_base(inner);
                    }
                }
            }
        }
        if !nonzero {
            return Grid::zero();
        }
        Grid {
            n,
            swapped: layout.swapped,
            p: pbase,
            q: qbase,
            g,
            state: GridState::Ready,
        }
    }

    /// `∂t^p ∂s^q K_F` at `pt`.
    pub fn kernel_deriv(&mut self, pt: &KernelPoint, p: u32, q: u32) -> Complex64 {
        let (m1, m2) = (pt.params.m1, pt.params.m2);
        let key = (
            (pt.t.to_bits(), pt.s.to_bits(), p, q),
            [m1.re, m1.im, m2.re, m2.im].map(f64::to_bits),
            pt.params.eps1,
            pt.params.eps2,
        );
        if let Some(v) = self.values.get(&key) {
            return *v;
        }
        let grid = self.grid(pt.t, pt.s, p, q);
        let shift = Complex64::new(-1.5, 0.0);
        let v = grid.integrate(m1 + shift, pt.params.eps1, m2 + shift, pt.params.eps2);
        self.values.insert(key, v);
        v
    }

    pub fn kernel(&mut self, pt: &KernelPoint) -> Complex64 {
        self.kernel_deriv(pt, 0, 0)
    }

    /// `A K_F` at `pt`: each monomial `c · t^i s^j ∂t^p ∂s^q V1^k V2^l`
    /// contributes `c(μ) t^i s^j ∂t^p ∂s^q K_F(t, s | μ1+k, ε1+k; μ2+l, ε2+l)`.
    pub fn apply(&mut self, a: &FourierOperator, pt: &KernelPoint) -> Result<Complex64, PoleError> {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in a.terms() {
            let coeff = c.eval(pt.params.m1, pt.params.m2)?;
            let shifted = KernelPoint::new(pt.t, pt.s, pt.params.shifted(m.k, m.l));
            let k = self.kernel_deriv(&shifted, m.p, m.q);
            total += coeff * pt.t.powi(m.i as i32) * pt.s.powi(m.j as i32) * k;
        }
        Ok(total)
    }
}

/// `K_F` at one point.
pub fn eval_kernel(f: &SymExpr, support: &SupportBox, pt: &KernelPoint, spec: QuadratureSpec) -> Complex64 {
    KernelEvaluator::new(f, support, spec).kernel(pt)
}

/// `∂t^p ∂s^q K_F` at one point, by differentiation under the integral.
pub fn eval_kernel_deriv(
    f: &SymExpr,
    support: &SupportBox,
    pt: &KernelPoint,
    p: u32,
    q: u32,
    spec: QuadratureSpec,
) -> Complex64 {
    KernelEvaluator::new(f, support, spec).kernel_deriv(pt, p, q)
}

/// `(A K_F)(pt)` for a Fourier-side operator `A`.
pub fn apply_fourier_operator(
    a: &FourierOperator,
    f: &SymExpr,
    support: &SupportBox,
    pt: &KernelPoint,
    spec: QuadratureSpec,
) -> Result<Complex64, PoleError> {
    KernelEvaluator::new(f, support, spec).apply(a, pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::ParamPoint;
    use crate::quad::KernelCoords;
    use crate::symfunc::standard_bump;

    fn mu_point(t: f64, s: f64) -> KernelPoint {
        KernelPoint::new(
            t,
            s,
            ParamPoint::new(Complex64::new(0.23, 0.31), 0, Complex64::new(-0.41, -0.17), 1),
        )
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn zero_function_and_linearity() {
        let (f, b) = standard_bump(0.4).unwrap();
        let spec = QuadratureSpec::new(24);
        let pt = mu_point(0.2, 0.2);
        assert_eq!(eval_kernel(&SymExpr::zero(), &b, &pt, spec), Complex64::new(0.0, 0.0));
        let k1 = eval_kernel(&f, &b, &pt, spec);
        let k2 = eval_kernel(&f.scale(2.0), &b, &pt, spec);
        assert!((k2 - k1 * 2.0).norm() <= 1e-14 * k1.norm());
        assert_eq!(
            eval_kernel(&f, &b, &mu_point(-0.8, 0.7), spec),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn coordinate_systems_agree() {
        let (f, b) = standard_bump(0.4).unwrap();
        let pt = mu_point(0.7, 0.2);
        let sheared = eval_kernel(&f, &b, &pt, QuadratureSpec::new(64));
        let boxed = eval_kernel(
            &f,
            &b,
            &pt,
            QuadratureSpec {
                order: 96,
                coords: KernelCoords::Box,
            },
        );
        assert!(rel(boxed, sheared) < 1e-6, "{}", rel(boxed, sheared));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let (f, b) = standard_bump(0.4).unwrap();
        let mut ev = KernelEvaluator::new(&f, &b, QuadratureSpec::new(64));
        let pt = mu_point(0.2, -0.1);
        let h = 1e-4;
        let at =
            |ev: &mut KernelEvaluator, dt: f64, ds: f64| ev.kernel(&KernelPoint::new(pt.t + dt, pt.s + ds, pt.params));
        let fd_t = (at(&mut ev, h, 0.0) - at(&mut ev, -h, 0.0)) / (2.0 * h);
        assert!(rel(fd_t, ev.kernel_deriv(&pt, 1, 0)) < 1e-5);
        let fd_ss = (at(&mut ev, 0.0, h) - at(&mut ev, 0.0, 0.0) * 2.0 + at(&mut ev, 0.0, -h)) / (h * h);
        assert!(rel(fd_ss, ev.kernel_deriv(&pt, 0, 2)) < 1e-4);
        assert_eq!(ev.kernel_deriv(&pt, 0, 0), ev.kernel(&pt));
    }

    #[test]
    fn kernel_is_holomorphic_in_mu1() {
        let (f, b) = standard_bump(0.4).unwrap();
        let mut ev = KernelEvaluator::new(&f, &b, QuadratureSpec::new(48));
        let base = mu_point(-0.3, -0.3);
        let h = 1e-4;
        let at = |ev: &mut KernelEvaluator, d: Complex64| {
            let mut p = base;
            p.params.m1 += d;
            ev.kernel(&p)
        };
        let dx = (at(&mut ev, Complex64::new(h, 0.0)) - at(&mut ev, Complex64::new(-h, 0.0))) / (2.0 * h);
        let dy = (at(&mut ev, Complex64::new(0.0, h)) - at(&mut ev, Complex64::new(0.0, -h))) / (2.0 * h);
        let dbar = (dx + Complex64::i() * dy) * 0.5;
        assert!(dbar.norm() < 1e-6 * dx.norm(), "{}", dbar.norm() / dx.norm());
    }

    #[test]
    fn reflected_bump_flips_with_eps1() {
        // u < 0 and w > 0 on the support
        let (f, b) = crate::symfunc::reflected_bump(0.4).unwrap();
        let mut ev = KernelEvaluator::new(&f, &b, QuadratureSpec::new(32));
        let mut at = |e1, e2| {
            let mut p = mu_point(0.2, -0.3);
            p.params.eps1 = e1;
            p.params.eps2 = e2;
            ev.kernel(&p)
        };
        let k00 = at(0, 0);
        assert!(k00.norm() > 0.0);
        assert!((at(1, 0) + k00).norm() < 1e-14 * k00.norm());
        assert!((at(0, 1) - k00).norm() < 1e-14 * k00.norm());
        assert!((at(1, 1) + k00).norm() < 1e-14 * k00.norm());
    }

    #[test]
    fn substituted_determinant_is_uw() {
        // (u - tv)(sv + w) - (su - stv - tw) v, expanded over monomials u^a v^b w^c t^d s^e
        use std::collections::BTreeMap;
        type P = BTreeMap<[u32; 5], i64>;
        fn mono(c: i64, e: [u32; 5]) -> P {
            [(e, c)].into_iter().collect()
        }
        fn add(a: &P, b: &P) -> P {
            let mut r = a.clone();
            for (e, c) in b {
                *r.entry(*e).or_insert(0) += c;
            }
            r.retain(|_, c| *c != 0);
            r
        }
        fn mul(a: &P, b: &P) -> P {
            let mut r = P::new();
            for (e, c) in a {
                for (f, d) in b {
                    let g = [0, 1, 2, 3, 4].map(|i| e[i] + f[i]);
                    r = add(&r, &mono(c * d, g));
                }
            }
            r
        }
        let (u, v, w, t, s) = (
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1],
        );
        let a = add(&mono(1, u), &mono(-1, [0, 1, 0, 1, 0]));
        let b = add(
            &add(&mono(1, [1, 0, 0, 0, 1]), &mono(-1, [0, 1, 0, 1, 1])),
            &mono(-1, [0, 0, 1, 1, 0]),
        );
        let c = mono(1, v);
        let d = add(&mono(1, [0, 1, 0, 0, 1]), &mono(1, w));
        let det = add(&mul(&a, &d), &mul(&mono(-1, [0; 5]), &mul(&b, &c)));
        assert_eq!(det, mono(1, [1, 0, 1, 0, 0]));
        let _ = (t, s);
    }

    #[test]
    fn reference_values() {
        let (f, b) = standard_bump(0.4).unwrap();
        let mut ev = KernelEvaluator::new(&f, &b, QuadratureSpec::new(64));
        let zero = ParamPoint::new(Complex64::new(0.0, 0.0), 0, Complex64::new(0.0, 0.0), 0);
        let k0 = ev.kernel(&KernelPoint::new(0.0, 0.0, zero));
        assert!(rel(k0, Complex64::new(0.002_276_592_745_548_633, 0.0)) < 1e-10, "{k0}");
        let k1 = ev.kernel(&mu_point(0.2, -0.3));
        let expect = Complex64::new(1.226_612_079_603_68e-6, -7.073_517_606_57e-8);
        assert!(rel(k1, expect) < 1e-9, "{k1}");
    }

    #[test]
    fn doubling_the_order_converges() {
        let (f, b) = standard_bump(0.4).unwrap();
        let pt = mu_point(0.7, 0.7);
        let k64 = eval_kernel(&f, &b, &pt, QuadratureSpec::new(64));
        let k128 = eval_kernel(&f, &b, &pt, QuadratureSpec::new(128));
        assert!(rel(k64, k128) < 1e-8, "{}", rel(k64, k128));
    }

    #[test]
    fn generator_image_residual() {
        use crate::group::{gop_apply, Coord};
        use crate::theta::{theta_generator, Generator};
        let (f, b) = standard_bump(0.4).unwrap();
        let spec = QuadratureSpec::new(64);
        let pt = mu_point(0.2, 0.2);
        for g in [Generator::coord(Coord::C), Generator::deriv(Coord::B)] {
            let df = gop_apply(&g.operator(), &f, &b).unwrap();
            let lhs = eval_kernel(&df, &b, &pt, spec);
            let rhs = apply_fourier_operator(&theta_generator(g), &f, &b, &pt, spec).unwrap();
            assert!(rel(lhs, rhs) < 1e-6, "{}: {}", g.name(), rel(lhs, rhs));
        }
    }
}
