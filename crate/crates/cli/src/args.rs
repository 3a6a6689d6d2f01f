use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Serialize, Serializer};

use sepoly::{FamilyType, Parity};

#[derive(Parser, Debug)]
#[command(name = "sepoly", version, about = "Exact verification of the superelliptic polynomial families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads for independent cells (0 = all cores).
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Generate a family from the recursion.
    Gen(GenArgs),
    /// Residual scan of the closed-form operator over a grid.
    VerifyOde(GridArgs),
    /// Per-cell survey: alignment, residuals, kernel dimension, Favard positivity.
    Scan(GridArgs),
    /// Indicial polynomial and leading-symbol check.
    Indicial(IndicialArgs),
    /// Polynomial kernel of the operator.
    Kernel(KernelArgs),
    /// Classify every seed index for (r, m).
    Classify(ClassifyArgs),
    /// Fit and certify a superposition of the canonical families.
    Superpose(SuperposeArgs),
    /// Gegenbauer basis, or the reduction of the j0 = -1 / -r-1 families.
    Gegenbauer(GegenbauerArgs),
    /// Favard coefficients a_n and their positivity.
    Favard(FavardArgs),
    /// Gram matrix of the monic sequence under the moment functional.
    Gram(GramArgs),
    /// Associated-ultraspherical identification.
    Identify(IdentifyArgs),
    /// First-order generating-function ODE residual.
    Series(SeriesArgs),
    /// Per-degree PDE residuals.
    Pde(SeriesArgs),
    /// Fit a fourth-order operator blind from family members.
    FitOde(FitArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::VerifyOde(_) => "verify-ode",
            Command::Scan(_) => "scan",
            Command::Indicial(_) => "indicial",
            Command::Kernel(_) => "kernel",
            Command::Classify(_) => "classify",
            Command::Superpose(_) => "superpose",
            Command::Gegenbauer(_) => "gegenbauer",
            Command::Favard(_) => "favard",
            Command::Gram(_) => "gram",
            Command::Identify(_) => "identify",
            Command::Series(_) => "series",
            Command::Pde(_) => "pde",
            Command::FitOde(_) => "fit-ode",
        }
    }
}

pub fn parse_type(s: &str) -> Result<FamilyType, String> {
    match s {
        "1" | "type1" => Ok(FamilyType::Type1),
        "2" | "type2" => Ok(FamilyType::Type2),
        _ => Err(format!("expected 1 or 2, got {s:?}")),
    }
}

/// Inclusive range `a..b`, or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}

fn parse_parity(s: &str) -> Result<Parity, String> {
    match s {
        "even" => Ok(Parity::Even),
        "odd" => Ok(Parity::Odd),
        _ => Err(format!("expected even or odd, got {s:?}")),
    }
}

fn ser_range<S: Serializer>(r: &RangeInclusive<i64>, s: S) -> Result<S::Ok, S::Error> {
    format!("{}..{}", r.start(), r.end()).serialize(s)
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub m: i64,
    /// Seed index in [-2r, -1]; defaults to -2r.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "family_type")]
    pub j0: Option<i64>,
    /// Canonical family instead of an explicit j0.
    #[arg(long = "type", value_parser = parse_type)]
    pub family_type: Option<FamilyType>,
    /// Last index; defaults to 12r.
    #[arg(long)]
    pub kmax: Option<i64>,
    /// Print `P_k = ...` lines instead of JSON.
    #[arg(long)]
    pub print: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct GridArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub family_type: FamilyType,
    #[arg(long, value_parser = parse_range, default_value = "2..8")]
    #[serde(serialize_with = "ser_range")]
    pub r_range: RangeInclusive<i64>,
    #[arg(long, value_parser = parse_range, default_value = "2..10")]
    #[serde(serialize_with = "ser_range")]
    pub m_range: RangeInclusive<i64>,
    /// Also check every aligned n <= F·r.
    #[arg(long, value_name = "F")]
    pub n_max_factor: Option<i64>,
}

#[derive(Args, Debug, Serialize)]
pub struct IndicialArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub family_type: FamilyType,
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub n: i64,
    #[arg(long, default_value_t = 20)]
    pub s_max: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct KernelArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub family_type: FamilyType,
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub n: i64,
    /// Degree bound; defaults to the largest admissible degree + 4.
    #[arg(long)]
    pub bound: Option<usize>,
    #[arg(long, value_parser = parse_parity)]
    pub parity: Option<Parity>,
}

#[derive(Args, Debug, Serialize)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub kmax: Option<i64>,
}

#[derive(Args, Debug, Serialize)]
pub struct SuperposeArgs {
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub m: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub j0: i64,
    #[arg(long)]
    pub kmax: Option<i64>,
    /// Also search independent index shifts up to this size.
    #[arg(long, default_value_t = 0)]
    pub max_shift: i64,
}

#[derive(Args, Debug, Serialize)]
pub struct GegenbauerArgs {
    #[arg(long)]
    pub m: i64,
    /// Basis size when no family is given.
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    /// With --j0: check the reduction of that family.
    #[arg(long, requires = "j0")]
    pub r: Option<i64>,
    #[arg(long, allow_hyphen_values = true, requires = "r")]
    pub j0: Option<i64>,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct FavardArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub family_type: FamilyType,
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub m: i64,
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct GramArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub family_type: FamilyType,
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub m: i64,
    #[arg(long = "N", default_value_t = 12)]
    pub n: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct IdentifyArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub family_type: FamilyType,
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub m: i64,
    /// Sequence length used for certification.
    #[arg(long, default_value_t = 52)]
    pub terms: i64,
}

#[derive(Args, Debug, Serialize)]
pub struct SeriesArgs {
    #[arg(long = "type", value_parser = parse_type)]
    pub family_type: FamilyType,
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub m: i64,
    /// z-truncation order.
    #[arg(long = "K", default_value_t = 40)]
    pub k: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct FitArgs {
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub m: i64,
    #[arg(long = "type", value_parser = parse_type, conflicts_with = "j0")]
    pub family_type: Option<FamilyType>,
    #[arg(long, allow_hyphen_values = true)]
    pub j0: Option<i64>,
    #[arg(long, default_value_t = 60)]
    pub kmax: i64,
}
