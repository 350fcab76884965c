//! Batch front end: every library pipeline as a reproducible command with
//! file input and structured output. Exit codes separate broken input (1)
//! from a mathematical property that failed verification (2).

mod artifact;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Why a run did not succeed. Input maps to exit 1, Verify to exit 2;
/// every Verify message starts with the name of the invariant that failed.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Verify(String),
}

#[derive(Parser)]
#[command(
    name = "zetafield",
    version,
    about = "Zeta functions of curves over finite fields: construction, \
             verification, value distribution, perturbation, approximation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Operations on a curve spec file
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Build and verify the zeta function of a curve
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Functional-equation-preserving perturbations of the zeta
    #[command(subcommand)]
    Perturb(PerturbCmd),
    /// Approximate exp(s) on the unit disk by a finite translate sum
    Approx(ApproxArgs),
    /// Re-check serialized artifacts offline
    #[command(subcommand)]
    Validate(ValidateCmd),
}

#[derive(Subcommand)]
pub enum CurveCmd {
    /// Count projective points over F_{q^n}, n = 1..max(2g, 2)
    Count(CountArgs),
}

#[derive(Subcommand)]
pub enum ZetaCmd {
    /// Full construction report: L-polynomial, roots, class number,
    /// residue, functional equation, Weil coefficients
    Build(BuildArgs),
    /// Root-location check only
    Rh(RhArgs),
    /// Value-distribution profile over a radius grid
    Nevanlinna(NevanlinnaArgs),
}

#[derive(Subcommand)]
pub enum PerturbCmd {
    /// Multiply by a small exact multiplier that plants an off-circle
    /// zero orbit
    FailRh(FailRhArgs),
    /// Remove all off-circle zeros of a member exactly
    FixRh(FixRhArgs),
}

#[derive(Subcommand)]
pub enum ValidateCmd {
    /// Rebuild a member artifact and re-run the membership checks
    Member(MemberArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Report,
    Csv,
}

#[derive(Args)]
pub struct CountArgs {
    /// Curve spec file (TOML)
    #[arg(long)]
    pub spec: PathBuf,
    /// Also write the report to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BuildArgs {
    /// Curve spec file (TOML)
    #[arg(long)]
    pub spec: PathBuf,
    /// Root-on-circle tolerance
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Seed for the functional-equation sample set
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also write the report to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct RhArgs {
    /// Curve spec file (TOML)
    #[arg(long)]
    pub spec: PathBuf,
    /// Root-on-circle tolerance
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Also write the report to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct NevanlinnaArgs {
    /// Curve spec file (TOML)
    #[arg(long)]
    pub spec: PathBuf,
    /// Largest radius of the grid (the grid spans [rmax/100, rmax])
    #[arg(long, default_value_t = 1e3)]
    pub rmax: f64,
    /// Grid density in radii per decade
    #[arg(long, default_value_t = 6.0)]
    pub grid: f64,
    /// Probe values: comma-separated list of complex numbers or `inf`
    /// (default 0,1,2,i,inf)
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<String>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Report)]
    pub format: Format,
    /// Also write the output to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FailRhArgs {
    /// Curve spec file (TOML)
    #[arg(long)]
    pub spec: PathBuf,
    /// Uniform closeness bound on the annulus
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Outer radius of the annulus 1/(q r) <= |u| <= r (must exceed q)
    #[arg(long, default_value_t = 10.0)]
    pub annulus: f64,
    /// Root-on-circle tolerance for the final verdict
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Write the member artifact (TOML) to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FixRhArgs {
    /// Member artifact file (TOML)
    #[arg(long)]
    pub spec: PathBuf,
    /// Off-circle classification tolerance
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the restored member artifact (TOML) to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ApproxArgs {
    /// Curve spec file (TOML); its zeta is the approximation base
    #[arg(long)]
    pub spec: PathBuf,
    /// Grid step of the collar Riemann sum
    #[arg(long, default_value_t = 0.0625)]
    pub grid: f64,
    /// Scale parameter, or `auto` to derive it from the geometry
    #[arg(long, default_value = "auto")]
    pub eta: String,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Report)]
    pub format: Format,
    /// Also write the output to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct MemberArgs {
    /// Member artifact file (TOML)
    #[arg(long)]
    pub spec: PathBuf,
    /// Root-on-circle tolerance for the informational RH line
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Also write the report to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
