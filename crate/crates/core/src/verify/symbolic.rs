use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{Settings, VerificationCase, VerificationReport};
use crate::coeffs::Rational;
use crate::group::{CoordPoly, GroupOperator, LocalizedCoeff};
use crate::theta::{
    check_invariant_fields, check_mu_shift_claim, check_sp8_samples, check_structure_constants,
    theta_welldefined_suite, Theta,
};

pub const HOMOMORPHISM: &str = "homomorphism";
/// Pairs drawn by the homomorphism property test.
pub const HOMOMORPHISM_PAIRS: usize = 50;

/// A random operator with at most three terms, coordinate degree at most
/// two, at most one `Δ⁻¹` and derivative order at most two.
pub fn random_operator(rng: &mut impl Rng) -> GroupOperator {
    let mut out = GroupOperator::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3i64..=3);
        }
        let mut e = [0u32; 4];
        for _ in 0..rng.gen_range(0..=2) {
            e[rng.gen_range(0..4)] += 1;
        }
        let detpow = u32::from(rng.gen_bool(0.25));
        let mut d = [0u32; 4];
        for _ in 0..rng.gen_range(0..=2) {
            d[rng.gen_range(0..4)] += 1;
        }
        let coeff = LocalizedCoeff::new(CoordPoly::monomial(Rational::from_integer(BigInt::from(c)), e), detpow);
        out = &out + &GroupOperator::monomial(coeff, d);
    }
    out
}

/// `Θ(AB) = Θ(A)Θ(B)` on seeded random pairs.
pub fn homomorphism_suite(settings: &Settings, pairs: usize) -> VerificationReport {
    let mut rng = StdRng::seed_from_u64(settings.seed);
    let mut theta = Theta::new();
    let mut report = VerificationReport::new(settings.config.clone());
    for i in 0..pairs {
        let a = random_operator(&mut rng);
        let b = random_operator(&mut rng);
        let lhs = theta.apply(&(&a * &b));
        let rhs = &theta.apply(&a) * &theta.apply(&b);
        let pass = lhs == rhs;
        let mut case = VerificationCase::symbolic(
            HOMOMORPHISM,
            format!("pair {i}: Theta(A*B) = Theta(A)*Theta(B), A = {a}, B = {b}"),
            pass,
        );
        if !pass {
            case = case.with_detail(format!("Theta(A*B) - Theta(A)*Theta(B) = {}", &lhs - &rhs));
        }
        report.push(case);
    }
    report
}

/// All symbolic suites; no quadrature.
pub fn verify_symbolic(settings: &Settings) -> VerificationReport {
    let mut report = VerificationReport::new(settings.config.clone());
    report.extend(theta_welldefined_suite());
    report.extend(check_mu_shift_claim());
    report.extend(check_sp8_samples());
    report.extend(check_invariant_fields());
    report.extend(check_structure_constants());
    report.extend(homomorphism_suite(settings, HOMOMORPHISM_PAIRS));
    report
}
