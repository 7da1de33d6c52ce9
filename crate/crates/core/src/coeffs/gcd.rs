//! GCD in ℚ[μ1, μ2], computed recursively: polynomials are viewed as
//! univariate in `μ1` over ℚ[μ2], and a primitive pseudo-remainder sequence
//! runs on the primitive parts while contents are handled by the Euclidean
//! algorithm in ℚ[μ2].

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::poly::{Exponent, ParamPoly};
use super::Rational;

/// Dense univariate polynomial in `μ2`, ascending, without trailing zeros.
type Uni = Vec<Rational>;
/// Dense polynomial in `μ1` with coefficients in ℚ[μ2], ascending.
type Rec = Vec<Uni>;

fn trim(p: &mut Uni) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn uni_sub(a: &Uni, b: &Uni) -> Uni {
    let n = a.len().max(b.len());
    let mut out: Uni = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn uni_mul(a: &Uni, b: &Uni) -> Uni {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn uni_divrem(a: &Uni, b: &Uni) -> (Uni, Uni) {
    let lb = b.last().expect("division by zero polynomial");
    let mut rem = a.clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let q = rem.last().unwrap() / lb;
        for (i, c) in b.iter().enumerate() {
            rem[i + shift] -= &q * c;
        }
        quot[shift] = q;
        trim(&mut rem);
    }
    (quot, rem)
}

fn uni_monic(a: &Uni) -> Uni {
    match a.last() {
        Some(l) if !l.is_one() => a.iter().map(|c| c / l).collect(),
        _ => a.clone(),
    }
}

fn uni_gcd(a: &Uni, b: &Uni) -> Uni {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let (_, r) = uni_divrem(&x, &y);
        x = y;
        y = r;
    }
    uni_monic(&x)
}

fn to_rec(p: &ParamPoly) -> Rec {
    let mut out: Rec = Vec::new();
    for (e, c) in p.terms() {
        let (i, j) = (e.0 as usize, e.1 as usize);
        if out.len() <= i {
            out.resize(i + 1, Vec::new());
        }
        if out[i].len() <= j {
            out[i].resize(j + 1, Rational::zero());
        }
        out[i][j] = c.clone();
    }
    out
}

fn from_rec(r: &Rec) -> ParamPoly {
    ParamPoly::from_terms(r.iter().enumerate().flat_map(|(i, u)| {
        u.iter()
            .enumerate()
            .map(move |(j, c)| (Exponent(i as u32, j as u32), c.clone()))
    }))
}

fn rec_trim(p: &mut Rec) {
    while p.last().is_some_and(|c| c.is_empty()) {
        p.pop();
    }
}

fn content(p: &Rec) -> Uni {
    p.iter().filter(|c| !c.is_empty()).fold(
        Vec::new(),
        |g, c| if g.is_empty() { uni_monic(c) } else { uni_gcd(&g, c) },
    )
}

fn primitive_part(p: &Rec) -> Rec {
    let c = content(p);
    p.iter()
        .map(|u| if u.is_empty() { Vec::new() } else { uni_divrem(u, &c).0 })
        .collect()
}

fn pseudo_rem(a: &Rec, b: &Rec) -> Rec {
    let lb = b.last().unwrap();
    let mut r = a.clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = uni_mul(c, lb);
        }
        for (i, c) in b.iter().enumerate() {
            r[i + shift] = uni_sub(&r[i + shift], &uni_mul(&lr, c));
        }
        rec_trim(&mut r);
    }
    r
}

/// Greatest common divisor, normalised to leading coefficient one.
/// `gcd(0, 0)` is zero.
/// Fast path when `a` splits into lines `μ1 - μ2 - m`, as every
/// denominator produced by the calculus does: strip the lines from `b`.
fn line_gcd(a: &ParamPoly, b: &ParamPoly) -> Option<ParamPoly> {
    let (_, roots) = a.difference_roots()?;
    let mut g = ParamPoly::one();
    let mut rest = b.clone();
    let mut i = 0;
    while i < roots.len() {
        let m = roots[i];
        let k = roots[i..].iter().take_while(|&&r| r == m).count();
        let line = &(&ParamPoly::mu1() - &ParamPoly::mu2()) - &ParamPoly::from_int(m);
        for _ in 0..k {
            if !may_vanish_on_line(&rest, m) {
                break;
            }
            match rest.div_exact(&line) {
                Some(q) => {
                    rest = q;
                    g = &g * &line;
                }
                None => break,
            }
        }
        i += k;
    }
    Some(g)
}

/// Floating pre-test for divisibility by `μ1 - μ2 - m`: `false` means
/// `p(μ2 + m, μ2)` is visibly nonzero at a generic point.
fn may_vanish_on_line(p: &ParamPoly, m: i64) -> bool {
    let y = Complex64::new(0.317_253_911, 0.273_491_457);
    let x = y + m as f64;
    p.eval(x, y).norm() <= 1e-8 * p.magnitude(x, y)
}

pub fn gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return ParamPoly::one();
    }
    if a == b {
        return a.monic();
    }
    if let Some(g) = line_gcd(b, a).or_else(|| line_gcd(a, b)) {
        return g;
    }
    let (ra, rb) = (to_rec(a), to_rec(b));
    let cont = uni_gcd(&content(&ra), &content(&rb));
    let (mut x, mut y) = (primitive_part(&ra), primitive_part(&rb));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { primitive_part(&r) };
    }
    let g: Rec = primitive_part(&x).iter().map(|u| uni_mul(u, &cont)).collect();
    from_rec(&g).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(m: i64) -> ParamPoly {
        &(&ParamPoly::mu1() - &ParamPoly::mu2()) - &ParamPoly::from_int(m)
    }

    #[test]
    fn gcd_of_products_of_pole_lines() {
        let a = &(&lin(0) * &lin(1)) * &lin(-1);
        let b = &lin(1) * &(&ParamPoly::mu1() + &ParamPoly::one());
        assert_eq!(gcd(&a, &b), lin(1));
        assert_eq!(gcd(&a, &lin(3)), ParamPoly::one());
    }

    #[test]
    fn gcd_with_content_in_mu2() {
        let m2 = ParamPoly::mu2();
        let a = &(&m2 * &lin(0)) * &(&ParamPoly::mu1() + &ParamPoly::from_int(2));
        let b = &(&m2 * &m2) * &lin(0);
        assert_eq!(gcd(&a, &b), &m2 * &lin(0));
    }

    #[test]
    fn gcd_is_monic_and_divides() {
        let a = (&ParamPoly::mu1() * &ParamPoly::mu1()).scale(&Rational::new(3.into(), 2.into()));
        let b = ParamPoly::mu1().scale(&Rational::from_integer(5.into()));
        let g = gcd(&a, &b);
        assert_eq!(g, ParamPoly::mu1());
        assert!(a.div_exact(&g).is_some());
    }
}
