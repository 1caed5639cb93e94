//! Command-line front end. [`run`] parses an argument vector, executes one
//! subcommand and returns the exit code together with everything that would
//! be written to stdout and stderr, so tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 an expected domain failure (generation failure,
//! verification mismatch, no fit), 2 a usage, parse or validation error.
//! Failures print a single `error code=<code> ...` line on stderr.

mod commands;
mod report;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{Envelope, REPORT_SCHEMA};

#[derive(Parser, Debug)]
#[command(name = "mrpgen", version, about = "Seeded generation of uniformly distributed RNS polynomials")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Omit the timestamp so identical inputs give byte-identical reports.
    #[arg(long, global = true)]
    pub canonical: bool,
    /// Worker threads for enumeration (defaults to available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand a seed into a full multi-residue polynomial.
    GenMrp(commands::GenMrpArgs),
    /// Expand a single limb; the modulus is appended to the base if absent.
    GenLimb(commands::GenLimbArgs),
    /// Expand one segment of one limb.
    GenSeg(commands::GenSegArgs),
    /// Draw seeds from a seeded ChaCha20 stream until one expands fully.
    RetryGen(commands::RetryGenArgs),
    /// Recompute an MRP file from its seed and compare.
    Verify(commands::VerifyArgs),
    /// Enumerate NTT-friendly moduli passing the catalog filter.
    EnumPrimes(commands::EnumPrimesArgs),
    /// Reproduce the four reference catalog rows.
    Table1,
    /// Fit the limb count to the reference thresholds.
    FitTable1(commands::FitArgs),
    /// Segment, limb and MRP success probabilities.
    Analyze(commands::AnalyzeArgs),
    /// Chi-square uniformity of every limb of an MRP file.
    Stats(commands::StatsArgs),
    /// Wiring power and bandwidth of central versus distributed generation.
    Cost(commands::CostArgs),
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: format!("error code=usage {}\n{rendered}", first_line(&rendered)),
                }
            };
        }
    };
    let global = cli.global.clone();
    match commands::execute(cli.command, &global) {
        Ok(done) => {
            let stdout = done.envelope.render(global.format, global.canonical);
            match done.failure {
                None => Outcome { code: 0, stdout, stderr: String::new() },
                Some(f) => Outcome { code: f.exit, stdout, stderr: f.line() },
            }
        }
        Err(f) => Outcome {
            code: f.exit,
            stdout: String::new(),
            stderr: f.line(),
        },
    }
}

fn first_line(s: &str) -> String {
    s.lines()
        .next()
        .unwrap_or_default()
        .trim_start_matches("error: ")
        .to_string()
}

/// A failure with its machine-readable code.
#[derive(Clone, Debug)]
pub(crate) struct Failure {
    pub exit: u8,
    pub code: &'static str,
    pub detail: String,
}

impl Failure {
    pub fn domain(code: &'static str, detail: impl Into<String>) -> Self {
        Failure { exit: 1, code, detail: detail.into() }
    }

    pub fn usage(code: &'static str, detail: impl Into<String>) -> Self {
        Failure { exit: 2, code, detail: detail.into() }
    }

    fn line(&self) -> String {
        format!("error code={} {}\n", self.code, self.detail.replace('\n', " "))
    }
}

impl From<mrpgen::Error> for Failure {
    fn from(e: mrpgen::Error) -> Self {
        use mrpgen::Error as E;
        match &e {
            E::Generation(g) => Failure::domain(
                "generation-failure",
                format!("q={} id_seg={} accepted={} required={}", g.q, g.id_seg, g.accepted, g.required),
            ),
            E::RetriesExhausted { attempts } => Failure::domain("retries-exhausted", format!("attempts={attempts}")),
            E::Infeasible(m) => Failure::domain("no-fit", m.clone()),
            E::Validation { field, reason } => Failure::usage("validation", format!("field={field} {reason}")),
            E::Config(m) => Failure::usage("config", m.clone()),
            E::InvalidArgument(m) => Failure::usage("invalid-argument", m.clone()),
            E::Format(m) => Failure::usage("format", m.clone()),
            E::Io(io) => Failure::usage("io", io.to_string()),
        }
    }
}
