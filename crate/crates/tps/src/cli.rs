//! Argument parsing and dispatch. [`run`] never exits the process, so the
//! whole command line can be exercised in-process.

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{self, CurvatureConfig, GaugeConfig, LengthConfig, Output, PullbackConfig, VerifyConfig};
use crate::config::Rep;

const GRAMMAR: &str = "\
Expressions (--omega):
  numbers        1, 0.5, 2e-3
  variables      w, p1..pn, q1..qn (1-based)
  operators      + - * / ^   (^ is right-associative)
  functions      exp(x), ln(x), sqrt(x)
  precedence     ^ binds tighter than unary minus: -q1^2 = -(q1^2)
  powers         integer exponents accept any base; others need base > 0
  no implicit multiplication: write 2*p1, not 2p1

Exit codes: 0 success, 1 failed check or singularity, 2 usage error.";

#[derive(Debug, Parser)]
#[command(
    name = "tps",
    version,
    about = "Contact geometry of the thermodynamic phase space",
    after_long_help = GRAMMAR,
    after_help = GRAMMAR
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check contact, para-contact and gauge identities at random points.
    #[command(after_help = GRAMMAR)]
    Verify(VerifyArgs),
    /// Apply a conformal gauge at one point and print the primed structures.
    #[command(after_help = GRAMMAR)]
    Gauge(GaugeArgs),
    /// Hessian metric of a fundamental relation on a grid.
    #[command(after_help = GRAMMAR)]
    Pullback(PullbackArgs),
    /// Scalar curvature of a Hessian metric on a grid or critical scan.
    #[command(after_help = GRAMMAR)]
    Curvature(CurvatureArgs),
    /// Length of a polyline under the Mrugała metric or a gauged one.
    #[command(after_help = GRAMMAR)]
    Length(LengthArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    output: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Degrees of freedom.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Number of random points.
    #[arg(long, default_value_t = 100)]
    points: usize,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pass threshold for every residual.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Gauge factor; repeat for several. Defaults to 1, 1/p1, exp(q1) and,
    /// for n ≥ 2, exp(0.5*p1 + q2).
    #[arg(long, allow_hyphen_values = true)]
    omega: Vec<String>,
    /// Random vector pairs per point.
    #[arg(long, default_value_t = 4)]
    pairs: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct GaugeArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Conformal factor Ω.
    #[arg(long, allow_hyphen_values = true)]
    omega: String,
    /// Point as `w=…,p1=…,q1=…`.
    #[arg(long, allow_hyphen_values = true)]
    at: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct PullbackArgs {
    /// Model JSON, inline or a file path.
    #[arg(long)]
    model: String,
    #[arg(long, value_enum, default_value = "energy")]
    rep: Rep,
    /// Grid `lo:hi:count,lo:hi:count`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct CurvatureArgs {
    /// Model JSON, inline or a file path.
    #[arg(long)]
    model: String,
    #[arg(long, value_enum, default_value = "entropy")]
    rep: Rep,
    /// Grid `lo:hi:count,lo:hi:count`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "scan")]
    grid: Option<String>,
    /// Scan `v = v_c` from 1.5·T_c down to (1+ε)·T_c (vdw only).
    #[arg(long)]
    scan: bool,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long, default_value_t = 40)]
    samples: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct LengthArgs {
    /// Polyline JSON, inline or a file path.
    #[arg(long)]
    curve: String,
    /// Midpoint-rule panels.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Measure with the gauged metric G′ for this Ω.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn render(output: Output, format: Format) -> Outcome {
    let stdout = match format {
        Format::Json => output.report.to_json(),
        Format::Csv => output.csv,
    };
    let mut stderr = String::new();
    for w in output.report.warnings() {
        stderr.push_str(&format!("warning: {w}\n"));
    }
    if !output.report.warnings().is_empty() {
        stderr.push_str(&format!("warning: {} row(s) skipped\n", output.report.warnings().len()));
    }
    let failed: Vec<&str> = output.report.residuals().iter().filter(|r| !r.pass()).map(|r| r.name.as_str()).collect();
    if !failed.is_empty() {
        stderr.push_str(&format!("error: {} check(s) failed: {}\n", failed.len(), failed.join(", ")));
    }
    Outcome { code: if failed.is_empty() { 0 } else { 1 }, stdout, stderr }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let (result, format) = match cli.command {
        Command::Verify(a) => (
            commands::verify(&VerifyConfig {
                n: a.n,
                points: a.points,
                seed: a.seed,
                tol: a.tol,
                omega: a.omega,
                pairs: a.pairs,
            }),
            a.out.output,
        ),
        Command::Gauge(a) => {
            (commands::gauge(&GaugeConfig { n: a.n, omega: a.omega, at: a.at, tol: a.tol }), a.out.output)
        }
        Command::Pullback(a) => {
            (commands::pullback(&PullbackConfig { model: a.model, rep: a.rep, grid: a.grid, tol: a.tol }), a.out.output)
        }
        Command::Curvature(a) => (
            commands::curvature(&CurvatureConfig {
                model: a.model,
                rep: a.rep,
                grid: a.grid,
                scan: a.scan,
                epsilon: a.epsilon,
                samples: a.samples,
            }),
            a.out.output,
        ),
        Command::Length(a) => {
            (commands::length(&LengthConfig { curve: a.curve, steps: a.steps, omega: a.omega }), a.out.output)
        }
    };
    match result {
        Ok(output) => render(output, format),
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
