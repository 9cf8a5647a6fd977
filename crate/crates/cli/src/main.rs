mod commands;
mod formats;
mod session;
mod suite;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact computations on group shifts.
#[derive(Parser, Debug)]
#[command(name = "nubshift", version, about)]
pub struct Cli {
    /// Write a machine-readable JSON report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Upper bound on certificate widths.
    #[arg(long, global = true)]
    width_cap: Option<usize>,
    /// Upper bound on candidates visited by exhaustive searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Session file with named definitions.
    #[arg(long, global = true)]
    session: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ShiftArgs {
    /// A session name, `builtin:<name>`, or a path to an SFT descriptor.
    #[arg(long)]
    sft: String,
    /// Alphabet for the parametric builtins (`full-shift`, `constants`, `trivial`).
    #[arg(long)]
    group: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum ModeArg {
    Stable,
    Invariant,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum DirectionArg {
    Fwd,
    Rev,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Example {
    #[value(name = "5.6")]
    SupportGrowth,
    #[value(name = "c4")]
    C4,
    #[value(name = "finite-centre")]
    FiniteCentre,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load a session file and list its bindings.
    Define,
    /// Depth of a transitive infinite group shift.
    Depth(ShiftArgs),
    /// The nub and its index in the host.
    Nub(ShiftArgs),
    /// Topological transitivity.
    Transitive(ShiftArgs),
    /// Homoclinic points in a window and the homoclinic closure.
    Homoclinic {
        #[command(flatten)]
        shift: ShiftArgs,
        /// Width of the support window `[0, width)`.
        #[arg(long, default_value_t = 3)]
        width: usize,
    },
    /// Classify a closed shift-invariant subgroup of `C_p^Z`.
    ClassifyAbelian {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, value_enum, default_value = "stable")]
        mode: ModeArg,
    },
    /// Composition series and factors.
    Series(ShiftArgs),
    /// Compare two series through given middle terms.
    JhCompare {
        #[arg(long)]
        host: String,
        #[arg(long)]
        group: Option<String>,
        /// Comma-separated intermediate terms, bottom to top; give exactly two.
        #[arg(long = "series", required = true, num_args = 1)]
        series: Vec<String>,
    },
    /// Solve `x⁻¹σ^k(x) = f` and check the round trip.
    Eta {
        #[arg(long)]
        group: String,
        /// `start:s0,s1,...` with element indices.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Truncated inverse systems.
    Limits {
        #[command(subcommand)]
        command: LimitsCommand,
    },
    /// Scale of the shift on the restricted shift.
    ScaleRestricted {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        direction: DirectionArg,
    },
    /// Run the acceptance checks and print a pass/fail table.
    PaperSuite {
        /// Run only criteria whose id, tag or name matches.
        #[arg(long)]
        filter: Option<String>,
        /// Run criteria on separate threads.
        #[arg(long)]
        parallel: bool,
        /// Test mode: flip the verdict of this criterion.
        #[arg(long)]
        inject_fault: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
pub enum LimitsCommand {
    RunExample {
        #[arg(value_enum)]
        example: Example,
        /// Prime for the support-growth system.
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Number of connectors in the truncation.
        #[arg(long, default_value_t = 6)]
        levels: usize,
        /// Support-width budget for the homoclinic certificate.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Largest support width for the exhaustive growth check.
        #[arg(long, default_value_t = 10)]
        width: usize,
        /// Level of the finite-centre example.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Largest period for the centre scan.
        #[arg(long, default_value_t = 8)]
        period: usize,
        /// Largest span searched for a right inverse.
        #[arg(long, default_value_t = 4)]
        span: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(nubshift_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<nubshift_core::Error> for CliError {
    fn from(e: nubshift_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            // a checked invariant failed inside the library
            CliError::Core(nubshift_core::Error::InternalInconsistency(_)) => 1,
            CliError::Core(_) => 3,
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "Usage".into(),
            CliError::Core(e) => format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string(),
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    ExitCode::from(commands::run(cli, &argv[1..]))
}
