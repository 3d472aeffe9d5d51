//! `qcensus`: exact and asymptotic counts of code equivalence classes.
//!
//! Exit status is 0 on success, 1 on invalid input and 2 when a work or
//! enumeration ceiling is exceeded. Errors are printed to standard error as
//! a single JSON object.

mod commands;
mod parse;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcensus::census::DEFAULT_WORK_CEILING;
use qcensus::{Error, GroupKind};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "qcensus", version, about = "Exact and asymptotic census of linear code equivalence classes")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Field size, a prime power.
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// Working precision in decimal digits (at least 10).
    #[arg(long, global = true, default_value_t = 50)]
    pub precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Budget of element actions for one census.
    #[arg(long = "work-ceiling", global = true, default_value_t = DEFAULT_WORK_CEILING)]
    pub work_ceiling: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of k-dimensional subspaces of F_q^n.
    Qbinom {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
    /// Number of subspaces of F_q^n of any dimension.
    Sum {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Certified enclosures of K_q, K_q(k) and the theta constants.
    Constants(ConstantsArgs),
    /// Exact number of equivalence classes.
    Census(CensusArgs),
    /// Asymptotic estimates next to exact values.
    Estimate(EstimateArgs),
    /// Distance between dimension proportions and their theta limit.
    Converge(ConvergeArgs),
    /// Discrete theta laws and the exact shifted distributions.
    Dist(DistArgs),
    /// Classify a dimension function against the growth condition.
    Star(StarArgs),
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    /// Also enclose the truncated product K_q(k).
    #[arg(long)]
    pub k: Option<u64>,
    /// Theta nome as a fraction or decimal; defaults to 1/q.
    #[arg(long)]
    pub nome: Option<String>,
    /// Maximum interval width; defaults to 10^-precision.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Perm,
    Mono,
    Semi,
}

impl From<Group> for GroupKind {
    fn from(g: Group) -> GroupKind {
        match g {
            Group::Perm => GroupKind::Permutation,
            Group::Mono => GroupKind::Monomial,
            Group::Semi => GroupKind::Semilinear,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Burnside,
    Orbits,
    Both,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long, value_enum)]
    pub group: Group,
    #[arg(long)]
    pub n: usize,
    /// Subspace dimension; all dimensions at once when omitted.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::Burnside)]
    pub method: MethodArg,
    /// Include per-element fixed-point counts (table and JSON only).
    #[arg(long)]
    pub profile: bool,
    /// Fill the elapsed_ms column; output is then not reproducible.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// q^{k(n-k)} / K_q(k) against the q-binomial.
    Qbinom,
    /// A q-binomial over the central one.
    Central,
    /// The central q-binomial over q^{⌊n/2⌋⌈n/2⌉}, against 1/K_q.
    CentralPower,
    /// Classes of dimension k.
    Class,
    /// Classes of all dimensions.
    Total,
    /// The number of subspaces of all dimensions.
    S,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long, value_enum)]
    pub what: Quantity,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, value_enum)]
    pub group: Option<Group>,
    /// Use the asymptotic form of S(n) for `--what total`.
    #[arg(long)]
    pub asymptotic_s: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for qcensus::theta::Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => qcensus::theta::Parity::Even,
            ParityArg::Odd => qcensus::theta::Parity::Odd,
        }
    }
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[arg(long, value_enum)]
    pub parity: ParityArg,
    #[arg(long, default_value_t = 1)]
    pub m_min: u64,
    #[arg(long)]
    pub m_max: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Theta2,
    Theta3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DistOp {
    /// Probability of one support point.
    Pmf,
    /// Draw `--count` points with `--seed`.
    Sample,
    /// Exact pmf of the shifted dimension distribution.
    Shifted,
    /// Total variation distance to the theta law at nome 1/q.
    Tv,
    /// Asymptotic form of p(k, 2m) or p(k, 2m+1).
    Asymptotic,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[arg(long, value_enum)]
    pub op: DistOp,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Nome as a fraction or decimal; defaults to 1/q.
    #[arg(long)]
    pub nome: Option<String>,
    /// Support point, e.g. 2, -1/2 or 1.5.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    HalfFloorMinusConst,
    HalfCeilPlusConst,
    HalfMinusPowerLog,
    ConstantDim,
    LinearFraction,
    Tabulated,
}

#[derive(Args, Debug)]
pub struct StarArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Comma-separated k(0), k(1), ...
    #[arg(long)]
    pub values: Option<String>,
}

fn fail(kind: &str, code: u8, message: &str) -> ExitCode {
    let line = serde_json::json!({ "error": kind, "exit": code, "message": message });
    eprintln!("{line}");
    ExitCode::from(code)
}

fn exit_for(e: &Error) -> ExitCode {
    if e.is_ceiling() {
        fail("ceiling", 2, &e.to_string())
    } else {
        fail("validation", 1, &e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return fail("usage", 1, first);
        }
    };
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => return exit_for(&e),
    };
    let written = match &cli.common.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            report.render(cli.common.format, &mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            report.render(cli.common.format, &mut lock).and_then(|_| lock.flush())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail("io", 1, &e.to_string()),
    }
}
