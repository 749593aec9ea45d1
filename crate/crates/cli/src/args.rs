use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epr_ga::{Direction64, ProductConvention};

use crate::error::CliError;

/// Off-unit component vectors beyond this are normalized with a warning.
pub const WARN_OFF_UNIT: f64 = 1e-6;
/// Off-unit component vectors beyond this are rejected.
pub const REJECT_OFF_UNIT: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(
    name = "epr-ga",
    version,
    about = "Grade-decomposed EPR-Bohm correlation harness"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Products of the bivector generators.
    Table,
    /// Raw and classified outcomes of both parties for both coin values.
    Measure,
    /// Correlation between settings a and b.
    Correlate,
    /// Correlation as b rotates away from a through 0..180 degrees.
    Sweep,
    /// CHSH string and bound expressions, optionally maximized.
    Chsh,
    /// Remote parameter independence and outcome marginals.
    Audit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Table => "table",
            Command::Measure => "measure",
            Command::Correlate => "correlate",
            Command::Sweep => "sweep",
            Command::Chsh => "chsh",
            Command::Audit => "audit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Fixed,
    Lambda,
}

impl From<ConventionArg> for ProductConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Fixed => ProductConvention::FixedBasis,
            ConventionArg::Lambda => ProductConvention::LambdaStructure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, global = true, value_enum, default_value = "lambda")]
    pub convention: ConventionArg,

    /// Monte Carlo trial count.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub n: u64,

    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Use the exact two-point average over the coin instead of sampling.
    #[arg(long, global = true)]
    pub exact: bool,

    /// Use the unnormalized average of classified outcomes.
    #[arg(long, global = true, conflicts_with = "exact")]
    pub naive: bool,

    /// Angular step of a sweep, in degrees.
    #[arg(long, global = true, default_value_t = 5.0)]
    pub step: f64,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Alice's first setting, degrees from e_x in the x-y plane.
    #[arg(
        long,
        global = true,
        allow_negative_numbers = true,
        conflicts_with = "a_vec"
    )]
    pub a: Option<f64>,
    /// Alice's second setting, degrees.
    #[arg(
        long,
        global = true,
        allow_negative_numbers = true,
        conflicts_with = "a2_vec"
    )]
    pub a2: Option<f64>,
    /// Bob's first setting, degrees.
    #[arg(
        long,
        global = true,
        allow_negative_numbers = true,
        conflicts_with = "b_vec"
    )]
    pub b: Option<f64>,
    /// Bob's second setting, degrees.
    #[arg(
        long,
        global = true,
        allow_negative_numbers = true,
        conflicts_with = "b2_vec"
    )]
    pub b2: Option<f64>,

    /// Alice's first setting as components `x,y,z`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a_vec: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a2_vec: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b_vec: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b2_vec: Option<String>,

    /// Normal of the sweep plane as `x,y,z`.
    #[arg(
        long,
        global = true,
        allow_hyphen_values = true,
        default_value = "0,0,1"
    )]
    pub normal_vec: String,

    /// Search for the settings maximizing the CHSH string.
    #[arg(long, global = true)]
    pub maximize: bool,

    /// Grid step of the maximizer, in degrees.
    #[arg(long, global = true, default_value_t = 15.0)]
    pub resolution: f64,

    /// Coordinate-descent passes of the maximizer.
    #[arg(long, global = true, default_value_t = 50)]
    pub refine: usize,
}

/// A parsed direction and whether it needed a visible renormalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsedDirection {
    pub direction: Direction64,
    pub warned: bool,
}

/// Parses `x,y,z`, normalizing silently within 1e-6 of unit length, with a
/// warning up to 1e-3, and rejecting anything further off.
pub fn parse_vector(flag: &str, text: &str) -> Result<ParsedDirection, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Validation(format!(
            "--{flag}: expected three comma-separated components, got {text:?}"
        )));
    }
    let mut v = [0.0f64; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| CliError::Validation(format!("--{flag}: malformed component {p:?}")))?;
    }
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let off = (norm - 1.0).abs();
    if off > REJECT_OFF_UNIT {
        return Err(CliError::Validation(format!(
            "--{flag}: vector {text:?} has length {norm}, not a unit direction"
        )));
    }
    let direction = Direction64::normalized(v[0], v[1], v[2])
        .map_err(|e| CliError::Validation(format!("--{flag}: {e}")))?;
    Ok(ParsedDirection {
        direction,
        warned: off > WARN_OFF_UNIT,
    })
}

pub fn parse_angle(flag: &str, degrees: f64) -> Result<ParsedDirection, CliError> {
    if !degrees.is_finite() {
        return Err(CliError::Validation(format!(
            "--{flag}: angle must be finite"
        )));
    }
    Ok(ParsedDirection {
        direction: Direction64::in_plane_deg(degrees),
        warned: false,
    })
}

/// Resolves one setting from its angle flag, its vector flag or the default angle.
pub fn resolve(
    flag: &str,
    angle: Option<f64>,
    vector: Option<&str>,
    default_deg: f64,
) -> Result<ParsedDirection, CliError> {
    match (angle, vector) {
        (Some(_), Some(_)) => Err(CliError::Validation(format!(
            "--{flag} and --{flag}-vec are mutually exclusive"
        ))),
        (None, Some(v)) => parse_vector(&format!("{flag}-vec"), v),
        (Some(d), None) => parse_angle(flag, d),
        (None, None) => parse_angle(flag, default_deg),
    }
}
