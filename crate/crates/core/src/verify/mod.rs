//! Verification harness: symbolic identity suites and numeric residual
//! suites, collected into a [`VerificationReport`].

mod numeric;
mod report;
mod symbolic;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use numeric::{
    composite_operators, mu_pairs, theorem1_refinement, transform_samples, ts_samples, verify_composites,
    verify_theorem1, verify_transform_definition, TransformSample, COMPOSITES, MU_PAIR_2, PARITIES, REFINED_ORDER,
    REFLECTED_SAMPLES, ROUNDING_FLOOR, SECOND_ORDER_TOL, SPOT_CHECKS, THEOREM1, TRANSFORM, TRANSFORM_TOL, TS_SAMPLES,
};
pub use report::{CasePoint, Config, Mode, Summary, VerificationCase, VerificationReport, NEAR_ZERO};
pub use symbolic::{homomorphism_suite, random_operator, verify_symbolic, HOMOMORPHISM, HOMOMORPHISM_PAIRS};

use crate::toy::{
    toy_commutation_checks, toy_default_matrices, toy_intertwining_check, toy_parity_independence,
    toy_verify_correspondences,
};

impl Default for Config {
    fn default() -> Self {
        Self {
            order: 64,
            tol: 1e-6,
            radius: 0.4,
            mu1: [0.23, 0.31],
            mu2: [-0.41, -0.17],
        }
    }
}

/// Configuration plus the knobs that are not part of the report.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub config: Config,
    /// Number of `(t, s)` samples of the kernel suites.
    pub points: usize,
    /// Seed of the randomized property suites.
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            config: Config::default(),
            points: TS_SAMPLES.len(),
            seed: 2024,
        }
    }
}

/// Correspondences, intertwining, commutation relations and parity
/// independence of the plane model.
pub fn verify_toy(settings: &Settings) -> VerificationReport {
    let config = &settings.config;
    let mut report = VerificationReport::new(config.clone());
    report.extend(toy_verify_correspondences(config));
    for (name, g) in toy_default_matrices() {
        match toy_intertwining_check(g, config) {
            Ok(r) => report.extend(r),
            Err(e) => report.push(VerificationCase::failed(
                crate::toy::SUITE,
                format!("intertwining, {name}"),
                None,
                e.to_string(),
            )),
        }
    }
    report.extend(toy_commutation_checks(config));
    report.extend(toy_parity_independence(config));
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Theorem1,
    Composites,
    Symbolic,
    Toy,
    Transform,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Theorem1,
        Suite::Composites,
        Suite::Symbolic,
        Suite::Toy,
        Suite::Transform,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Composites => "composites",
            Suite::Symbolic => "symbolic",
            Suite::Toy => "toy",
            Suite::Transform => "transform",
            Suite::All => "all",
        }
    }

    pub fn run(self, settings: &Settings) -> VerificationReport {
        match self {
            Suite::Theorem1 => verify_theorem1(settings),
            Suite::Composites => verify_composites(settings),
            Suite::Symbolic => verify_symbolic(settings),
            Suite::Toy => verify_toy(settings),
            Suite::Transform => verify_transform_definition(settings),
            Suite::All => verify_all(settings),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}` (expected theorem1, composites, symbolic, toy, transform or all)")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// Every suite, symbolic first.
pub fn verify_all(settings: &Settings) -> VerificationReport {
    let mut report = VerificationReport::new(settings.config.clone());
    report.extend(verify_symbolic(settings));
    report.extend(verify_toy(settings));
    report.extend(verify_theorem1(settings));
    report.extend(verify_composites(settings));
    report.extend(verify_transform_definition(settings));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn symbolic_suite_passes_and_is_seeded() {
        let s = Settings::default();
        let r = verify_symbolic(&s);
        assert!(r.all_pass(), "{}", r.to_text());
        let h1 = homomorphism_suite(&s, 5);
        let h2 = homomorphism_suite(&s, 5);
        assert_eq!(h1.to_json(), h2.to_json());
        assert_eq!(h1.cases.len(), 5);
    }

    #[test]
    fn sample_counts() {
        assert_eq!(ts_samples(8), TS_SAMPLES.to_vec());
        assert_eq!(ts_samples(3).len(), 3);
        assert_eq!(ts_samples(100).len(), 16);
    }
}
