//! Command-line front end for `carmichael-forms`.
//!
//! [`main_with`] runs one invocation against arbitrary writers and returns
//! the process exit code, so the binary and the tests share one path.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod fixtures;
pub mod output;
pub mod parse;

pub use output::{Body, Cell, Format, Report};

/// Failures surfaced to the user, each with a fixed exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Exit code 2.
    InvalidInput(String),
    /// Exit code 3.
    ResourceLimit(String),
    /// Exit code 4.
    FixtureFailure(String),
    /// Exit code 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::InvalidInput(_) => 2,
            CliError::ResourceLimit(_) => 3,
            CliError::FixtureFailure(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::InvalidInput(m) => write!(f, "invalid input: {m}"),
            CliError::ResourceLimit(m) => write!(f, "resource limit: {m}"),
            CliError::FixtureFailure(m) => write!(f, "fixture failure: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<carmichael_forms::Error> for CliError {
    fn from(e: carmichael_forms::Error) -> Self {
        use carmichael_forms::Error as E;
        match e {
            E::ResourceLimit(_) => CliError::ResourceLimit(e.to_string()),
            E::Internal(_) => CliError::Internal(e.to_string()),
            _ => CliError::InvalidInput(e.to_string()),
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FIXTURE_FAILURE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "carmichael-forms",
    version,
    about = "Carmichael numbers, digit-sum sets, universal forms and polygonal identities"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Override the ceiling on enumeration and set-sieve limits.
    #[arg(long, global = true, value_name = "N")]
    pub limit_max: Option<String>,
    /// Worker threads for parallel sieving.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Digit-set memberships and Carmichael flags of one value.
    Classify(ValueArgs),
    /// s-decompositions of one value.
    Decompose(DecomposeArgs),
    /// Carmichael numbers below a limit.
    Enumerate(EnumerateArgs),
    /// Distribution tables.
    Tables(TablesArgs),
    /// Universal form U_r(t).
    Form(FormArgs),
    /// Write a three-factor Carmichael number as U_r(t).
    Invert(ValueArgs),
    /// Polygonal numbers and indices.
    Polygonal {
        #[command(subcommand)]
        action: PolygonalAction,
    },
    /// Denominator of B_n(x) - B_n.
    BernoulliDenom {
        /// n >= 1
        n: String,
    },
    /// Run a bundled verification suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct ValueArgs {
    /// The value; may be omitted when --factors is given.
    pub m: Option<String>,
    /// Prime factorization `p1^e1,p2,...`, verified against the value.
    #[arg(long)]
    pub factors: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    AtLeast,
    Strict,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub value: ValueArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::AtLeast)]
    pub mode: ModeArg,
    /// List every decomposition instead of the first.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    All,
    Primary,
    Exceptional,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Exclusive upper bound.
    #[arg(long)]
    pub limit: String,
    #[arg(long, value_enum, default_value_t = FilterArg::All)]
    pub filter: FilterArg,
    /// Keep only values with exactly this many prime factors.
    #[arg(long)]
    pub factors: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// 1: C, C', ratios; 2: digit sets; 3: exceptional by factor count;
    /// 4: all by factor count.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub which: u8,
    /// `1e3..1e8` or a comma list.
    #[arg(long)]
    pub limits: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormAction {
    Params,
    Eval,
    Verify,
    Congruences,
    Diagnostics,
    Polygonal,
}

#[derive(Debug, Args)]
pub struct FormArgs {
    /// Triple `a,b,c`, pairwise coprime and increasing.
    #[arg(long)]
    pub r: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t: String,
    /// Restrict diagnostics and polygonal output to one factor index.
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(value_enum, default_value_t = FormAction::Eval)]
    pub action: FormAction,
}

#[derive(Debug, Subcommand)]
pub enum PolygonalAction {
    /// h with G^h_g = m, if integral.
    Index { m: String, g: String },
    /// G^h_n.
    Number {
        #[arg(allow_hyphen_values = true)]
        h: String,
        #[arg(allow_hyphen_values = true)]
        n: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    PaperFixtures,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, value_enum, default_value_t = Suite::PaperFixtures)]
    pub suite: Suite,
    /// Extra fixture file checked after the bundled suite.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
}

/// A rendered command result and its exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

/// Parses and runs one invocation without printing.
pub fn execute<I, T>(args: I) -> Result<(Cli, Outcome), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::InvalidInput(e.to_string()))?;
    let outcome = run(&cli)?;
    Ok((cli, outcome))
}

/// Runs a parsed invocation, inside a dedicated pool when `--threads` is set.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match cli.threads {
        Some(0) => Err(CliError::InvalidInput("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?
            .install(|| commands::dispatch(cli)),
        None => commands::dispatch(cli),
    }
}

/// Full invocation: parse, run, render. Returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(shown.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(shown.as_bytes());
                    CliError::InvalidInput(String::new()).exit_code()
                }
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if out
                .write_all(outcome.report.render(cli.format).as_bytes())
                .is_err()
            {
                return 1;
            }
            outcome.exit_code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
