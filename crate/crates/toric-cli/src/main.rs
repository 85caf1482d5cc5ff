//! `toric`: checks and grid sampling for scalar-flat toric metric families.
//!
//! Subcommands either print a report (one named check per line, each with a
//! computed value, a reference, a residual, and a tolerance) or, for `emit`,
//! one row of derived quantities per grid point. Exit codes: 0 all checks
//! pass, 1 input validation failed (config schema, polygon data, grid
//! clearance), 2 a numeric check failed, 3 an I/O failure.

mod config;
mod emit;
mod report;
mod suites;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

use config::Setup;

#[derive(Parser)]
#[command(
    name = "toric",
    version,
    about = "Scalar-flat toric metric families: validation, verification, \
             asymptotics, Killing norms, golden examples, and grid export"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the polygon data in a config file and report every rule.
    Validate(Flags),
    /// Metric identities on the sampling grid: volume form, inverse blocks,
    /// scalar-flatness with step halving, the Christoffel trace identity,
    /// and the two conformal-scalar pipelines.
    Verify(Flags),
    /// Decay of the determinant quotient against the comparison model along
    /// rays, with closed-form leading coefficients where they exist.
    Asympt(Flags),
    /// Killing norms on the polar rays: limits, growth, and the sampled
    /// closedness criterion.
    Killing(Flags),
    /// Golden-value checks for a built-in example (requires --builtin).
    Example(Flags),
    /// Write one row of derived quantities per grid point (CSV or JSON).
    Emit(Flags),
}

/// One shared flag namespace; each subcommand reads the flags it needs and
/// ignores the rest, so every suite parameter stays overridable.
#[derive(Args, Clone, Default)]
pub struct Flags {
    /// TOML config describing the polygon family and suite parameters.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write the report or the samples to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format. Reports default to a text table; emit defaults to csv.
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Override the grid resolution as NX,NY (extents come from the config).
    #[arg(long, value_name = "NX,NY")]
    pub grid: Option<String>,

    /// Finite-difference step for all sampled derivatives.
    #[arg(long = "fd-step", value_name = "H")]
    pub fd_step: Option<f64>,

    /// Tolerance for the scalar-flatness residual in `verify`.
    #[arg(long, value_name = "T")]
    pub tol: Option<f64>,

    /// Comma-separated ray angles in (0, pi) for the asymptotic fits.
    #[arg(long, value_name = "LIST")]
    pub theta: Option<String>,

    /// Inner radius of the decay-fit window.
    #[arg(long, value_name = "R")]
    pub rmin: Option<f64>,

    /// Outer radius of the decay-fit window.
    #[arg(long, value_name = "R")]
    pub rmax: Option<f64>,

    /// Number of radial samples in the decay-fit window.
    #[arg(long, value_name = "N")]
    pub rsamples: Option<usize>,

    /// Worker threads for grid sampling (default: all cores).
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,

    /// Built-in example for `example`.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,

    /// Populate q_model in `emit`: "comparison" for the family's canonical
    /// model, or a path to a second config to compare against.
    #[arg(long, value_name = "comparison|PATH")]
    pub model: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Disk,
    H2s2,
}

/// Failure classes, one per nonzero exit code.
pub enum Failure {
    /// Bad inputs: config schema, polygon data, grid clearance. Exit 1.
    Validation(String),
    /// A report ran to completion with at least one failing check. Exit 2.
    Suite,
    /// Missing or unwritable files. Exit 3.
    Io(String),
}

fn main() {
    match run(Cli::parse()) {
        Ok(()) => {}
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(Failure::Suite) => std::process::exit(2),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Cmd::Validate(flags) => {
            let setup = Setup::load(&flags)?;
            let records = suites::validate_records(&setup);
            let ok = report::deliver("validate", &records, &flags)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Validation("polygon data failed validation".into()))
            }
        }
        Cmd::Verify(flags) => {
            let setup = Setup::load(&flags)?;
            let map = setup.checked_map()?;
            let records = suites::verify_records(&setup, &map)?;
            finish("verify", &records, &flags)
        }
        Cmd::Asympt(flags) => {
            let setup = Setup::load(&flags)?;
            let map = setup.checked_map()?;
            let records = suites::asympt_records(&setup, &map)?;
            finish("asympt", &records, &flags)
        }
        Cmd::Killing(flags) => {
            let setup = Setup::load(&flags)?;
            let map = setup.checked_map()?;
            let records = suites::killing_records(&map)?;
            finish("killing", &records, &flags)
        }
        Cmd::Example(flags) => {
            let builtin = flags.builtin.ok_or_else(|| {
                Failure::Validation("--builtin is required for `example` (disk | h2s2)".into())
            })?;
            let h = flags.fd_step.unwrap_or(config::DEFAULT_FD_STEP);
            if !(h > 0.0) {
                return Err(Failure::Validation("--fd-step must be positive".into()));
            }
            let (name, records) = match builtin {
                Builtin::Disk => ("example disk", suites::disk_records(h)),
                Builtin::H2s2 => ("example h2s2", suites::h2s2_records(h)),
            };
            finish(name, &records, &flags)
        }
        Cmd::Emit(flags) => {
            let setup = Setup::load(&flags)?;
            let map = setup.checked_map()?;
            let model = match flags.model.as_deref() {
                None => None,
                Some("comparison") => Some(map.comparison_model().ok_or_else(|| {
                    Failure::Validation(format!(
                        "--model comparison: family '{}' is itself an asymptotic model \
                         and has no comparison model",
                        map.family_tag().name()
                    ))
                })?),
                Some(path) => {
                    let other = Setup::from_file(std::path::Path::new(path))?;
                    Some(other.checked_map()?)
                }
            };
            emit::run(&setup, &map, model.as_ref(), &flags)
        }
    }
}

fn finish(suite: &str, records: &[report::ReportRecord], flags: &Flags) -> Result<(), Failure> {
    if report::deliver(suite, records, flags)? {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}
