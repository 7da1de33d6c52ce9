use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Below this magnitude of the left side, a numeric case is judged by
/// absolute rather than relative error.
pub const NEAR_ZERO: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Numeric,
}

/// Kernel sample location `(t, s)` with the parities `(ε1, ε2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CasePoint {
    pub t: f64,
    pub s: f64,
    pub eps1: u8,
    pub eps2: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationCase {
    pub suite: String,
    pub label: String,
    pub mode: Mode,
    pub point: Option<CasePoint>,
    pub lhs: Option<[f64; 2]>,
    pub rhs: Option<[f64; 2]>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub tol: Option<f64>,
    pub pass: bool,
    /// Extra text for the human-readable report (computed normal forms).
    #[serde(skip)]
    pub detail: Option<String>,
}

impl VerificationCase {
    pub fn symbolic(suite: &str, label: impl Into<String>, pass: bool) -> Self {
        Self {
            suite: suite.into(),
            label: label.into(),
            mode: Mode::Symbolic,
            point: None,
            lhs: None,
            rhs: None,
            abs_err: None,
            rel_err: None,
            tol: None,
            pass,
            detail: None,
        }
    }

    /// Residual of `rhs` against the reference value `lhs`.
    pub fn numeric(
        suite: &str,
        label: impl Into<String>,
        point: Option<CasePoint>,
        lhs: Complex64,
        rhs: Complex64,
        tol: f64,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let near_zero = lhs.norm() < NEAR_ZERO;
        let rel_err = if near_zero { None } else { Some(abs_err / lhs.norm()) };
        let pass = match rel_err {
            Some(r) => r <= tol,
            None => abs_err <= tol,
        };
        Self {
            suite: suite.into(),
            label: label.into(),
            mode: Mode::Numeric,
            point,
            lhs: Some([lhs.re, lhs.im]),
            rhs: Some([rhs.re, rhs.im]),
            abs_err: Some(abs_err),
            rel_err,
            tol: Some(tol),
            pass,
            detail: None,
        }
    }

    /// A numeric case that could not be evaluated.
    pub fn failed(suite: &str, label: impl Into<String>, point: Option<CasePoint>, reason: String) -> Self {
        let mut c = Self::symbolic(suite, label, false);
        c.mode = Mode::Numeric;
        c.point = point;
        c.detail = Some(reason);
        c
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub order: usize,
    pub tol: f64,
    pub radius: f64,
    pub mu1: [f64; 2],
    pub mu2: [f64; 2],
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: Config,
    pub cases: Vec<VerificationCase>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(config: Config) -> Self {
        Self {
            config,
            cases: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, case: VerificationCase) {
        self.summary.total += 1;
        if !case.pass {
            self.summary.failures += 1;
        }
        self.cases.push(case);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for c in other.cases {
            self.push(c);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationCase> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Largest relative (or, near zero, absolute) residual over numeric cases.
    pub fn max_residual(&self) -> f64 {
        self.cases
            .iter()
            .filter_map(|c| c.rel_err.or(c.abs_err))
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let _ = write!(out, "{status} [{}] {}", c.suite, c.label);
            if let Some(p) = c.point {
                let _ = write!(out, " @ t={} s={} eps=({},{})", p.t, p.s, p.eps1, p.eps2);
            }
            match (c.rel_err, c.abs_err) {
                (Some(r), _) => {
                    let _ = write!(out, " rel_err={r:.3e}");
                }
                (None, Some(a)) => {
                    let _ = write!(out, " abs_err={a:.3e}");
                }
                _ => {}
            }
            out.push('\n');
            if let Some(d) = &c.detail {
                for line in d.lines() {
                    let _ = writeln!(out, "    {line}");
                }
            }
        }
        let _ = writeln!(
            out,
            "total: {}, failures: {}",
            self.summary.total, self.summary.failures
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> Config {
        Config {
            order: 64,
            tol: 1e-6,
            radius: 0.4,
            mu1: [0.23, 0.31],
            mu2: [-0.41, -0.17],
        }
    }

    #[test]
    fn pass_rules() {
        let one = Complex64::new(1.0, 0.0);
        let c = VerificationCase::numeric("s", "x", None, one, one * (1.0 + 1e-7), 1e-6);
        assert!(c.pass);
        let c = VerificationCase::numeric("s", "x", None, one, one * 1.01, 1e-6);
        assert!(!c.pass);
        let tiny = Complex64::new(1e-12, 0.0);
        let c = VerificationCase::numeric("s", "x", None, tiny, tiny * 3.0, 1e-6);
        assert!(c.pass && c.rel_err.is_none());
    }

    #[test]
    fn json_key_order() {
        let mut r = VerificationReport::new(config());
        r.push(VerificationCase::symbolic("symbolic", "x", true));
        let pt = CasePoint {
            t: 0.2,
            s: -0.3,
            eps1: 0,
            eps2: 1,
        };
        let one = Complex64::new(1.0, 0.5);
        r.push(VerificationCase::numeric("theorem1", "y", Some(pt), one, one, 1e-6));
        let json = r.to_json();
        let keys = [
            "\"config\"",
            "\"order\"",
            "\"tol\"",
            "\"radius\"",
            "\"mu1\"",
            "\"mu2\"",
            "\"cases\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        let case_keys = [
            "\"suite\"",
            "\"label\"",
            "\"mode\"",
            "\"point\"",
            "\"lhs\"",
            "\"rhs\"",
            "\"abs_err\"",
            "\"rel_err\"",
            "\"tol\"",
            "\"pass\"",
        ];
        let start = json.find("\"cases\"").unwrap();
        let mut last = start;
        for k in case_keys {
            let p = start + json[start..].find(k).unwrap();
            assert!(p > last, "{k}");
            last = p;
        }
        assert!(json.contains("\"summary\""));
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.summary, Summary { total: 2, failures: 0 });
        assert!(!json.contains("detail"));
    }
}
