//! Command implementations behind the `gl2calc` binary.

use std::collections::BTreeMap;
use std::fmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gl2calc_core::fourier::FourierOperator;
use gl2calc_core::parse::{parse_operator, ParseError};
use gl2calc_core::theta::theta;
use gl2calc_core::verify::{Settings, Suite, VerificationReport};
use serde_json::json;

/// Exit code when every case passes.
pub const EXIT_PASS: i32 = 0;
/// Exit code when at least one case fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for usage and parse errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gl2calc",
    version,
    about = "Fourier images of differential operators on GL(2,R) and their verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normal form of an operator expression.
    Parse {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print the Fourier image of an operator expression, grouped by shift.
    Theta {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// theorem1, composites, symbolic, toy, transform or all.
    #[arg(value_parser = parse_suite)]
    pub suite: Suite,
    /// Number of (t, s) samples of the kernel suites.
    #[arg(long)]
    pub points: Option<usize>,
    /// Gauss-Legendre points per axis.
    #[arg(long)]
    pub order: Option<usize>,
    /// Relative tolerance of the kernel suites.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Radius of the standard bump.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed of the randomized property suites.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: gl2calc_core::verify::UnknownSuite| e.to_string())
}

impl VerifyArgs {
    /// Settings with the flags applied over the defaults.
    pub fn settings(&self) -> Result<Settings, String> {
        let mut s = Settings::default();
        if let Some(n) = self.points {
            if n == 0 {
                return Err("--points must be at least 1".into());
            }
            s.points = n;
        }
        if let Some(q) = self.order {
            if q < gl2calc_core::quad::QuadratureSpec::MIN_ORDER {
                return Err(format!(
                    "--order must be at least {}",
                    gl2calc_core::quad::QuadratureSpec::MIN_ORDER
                ));
            }
            s.config.order = q;
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err("--tol must be positive".into());
            }
            s.config.tol = t;
        }
        if let Some(r) = self.radius {
            if !(r > 0.0 && r < 0.5) {
                return Err("--radius must lie in (0, 0.5)".into());
            }
            s.config.radius = r;
        }
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        Ok(s)
    }
}

/// Normal form of `text` in the input syntax.
pub fn cmd_parse(text: &str) -> Result<String, ParseError> {
    Ok(parse_operator(text)?.to_string())
}

/// `Θ(parse(text))` with one `V1^k V2^l` class per line, or as a JSON object.
pub fn cmd_theta(text: &str, format: Format) -> Result<String, ParseError> {
    let op = parse_operator(text)?;
    let image = theta(&op);
    let mut classes: BTreeMap<(i32, i32), FourierOperator> = BTreeMap::new();
    for (m, c) in image.terms() {
        let class = classes.entry((m.k, m.l)).or_default();
        *class = &*class + &FourierOperator::monomial(c.clone(), *m);
    }
    Ok(match format {
        Format::Text if image.is_zero() => "0".into(),
        Format::Text => classes.values().map(|op| op.to_string()).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let classes: Vec<_> = classes
                .iter()
                .map(|((k, l), op)| json!({ "k": k, "l": l, "terms": op.to_string() }))
                .collect();
            serde_json::to_string_pretty(&json!({
                "operator": op.to_string(),
                "image": image.to_string(),
                "classes": classes,
            }))
            .expect("theta serialization")
        }
    })
}

/// Runs `suite` and renders the report; the exit code is [`EXIT_PASS`]
/// exactly when no case fails.
pub fn cmd_verify(suite: Suite, settings: &Settings, format: Format) -> (i32, String) {
    let report = suite.run(settings);
    (exit_code(&report), render(&report, format))
}

pub fn exit_code(report: &VerificationReport) -> i32 {
    if report.summary.failures == 0 {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

/// Executes a parsed command line: `(exit code, stdout, stderr)`.
pub fn run(cli: Cli) -> (i32, String, String) {
    match cli.command {
        Command::Parse { expr } => match cmd_parse(&expr) {
            Ok(s) => (EXIT_PASS, s, String::new()),
            Err(e) => (EXIT_USAGE, String::new(), parse_error(&expr, &e)),
        },
        Command::Theta { expr, format } => match cmd_theta(&expr, format) {
            Ok(s) => (EXIT_PASS, s, String::new()),
            Err(e) => (EXIT_USAGE, String::new(), parse_error(&expr, &e)),
        },
        Command::Verify(args) => match args.settings() {
            Ok(settings) => {
                let (code, out) = cmd_verify(args.suite, &settings, args.format);
                (code, out, String::new())
            }
            Err(msg) => (EXIT_USAGE, String::new(), format!("error: {msg}")),
        },
    }
}

/// The error with a caret under the offending byte.
fn parse_error(text: &str, e: &ParseError) -> String {
    let col = text.get(..e.pos()).map_or(text.chars().count(), |p| p.chars().count());
    format!("error: {e}\n  {text}\n  {}^", " ".repeat(col))
}
