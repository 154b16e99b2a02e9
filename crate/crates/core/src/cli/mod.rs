//! Command-line front end of `ttw-orbits`.
//!
//! ```text
//! ttw-orbits <trace|orbit|verify|singular|figures|k1map> [options]
//! ```
//!
//! Numeric output is CSV by default (17 significant digits, `,` delimiter,
//! LF line endings, header row) or JSON with one array per column and a
//! `meta` object. Exit codes: 0 ok, 2 validation, 3 integration,
//! 4 verification.

mod commands;
pub mod table;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::k1::CartesianConstants;
use crate::presets::{figure, Figure};
use crate::types::{Rational, SystemParams};

pub use commands::{verify_trajectory, Check, Thresholds, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INTEGRATION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

/// Environment variable overriding every verification tolerance.
pub const TOL_ENV: &str = "TTW_DEFAULT_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "ttw-orbits",
    version,
    about = "Closed orbits of the TTW family: trajectories, orbit equations and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate Hamilton's equations and write t, r, phi, x, y, p_r, p_phi, H, X.
    Trace(Options),
    /// Sample the closed-form orbit: phi, r, x, y, root_index, branch, sector.
    Orbit(Options),
    /// Integrate (or read a trace with --input) and check conservation,
    /// period, closure, orbit residual and singular count.
    Verify(Options),
    /// Candidate singular points of the orbit equation.
    Singular(Options),
    /// Write the data of one figure preset (or all with no --preset) into
    /// the directory given by --out.
    Figures(Options),
    /// Region map of the k = 1 constants, or one cartesian-to-polar mapping
    /// with --e1 and --S.
    K1map(Options),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct Options {
    /// Oscillator frequency [default: 2].
    #[arg(long)]
    pub omega: Option<f64>,
    /// Barrier strength on the cos walls [default: 3].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Barrier strength on the sin walls [default: 2].
    #[arg(long)]
    pub beta: Option<f64>,
    /// Deformation parameter as M or M/N [default: 1].
    #[arg(long)]
    pub k: Option<Rational>,
    /// Energy E.
    #[arg(long)]
    pub energy: Option<f64>,
    /// Angular integral A.
    #[arg(long = "A")]
    pub a: Option<f64>,
    /// Trajectory constant C in [0, pi].
    #[arg(long = "C")]
    pub c: Option<f64>,
    /// End time of the integration.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Output samples (trace, verify), points per sector (orbit) or grid
    /// points per axis (region maps).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Keep only this root, counted from 0 in ascending r.
    #[arg(long)]
    pub root: Option<usize>,
    /// Output file, or directory for `figures`. Standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Figure preset fig1..fig14; explicit flags override its values.
    #[arg(long)]
    pub preset: Option<String>,
    /// Initial angle (trace, verify).
    #[arg(long)]
    pub phi0: Option<f64>,
    /// Initial radius (trace, verify).
    #[arg(long)]
    pub r0: Option<f64>,
    /// Initial radial phase when C is given and no phi0/r0 [default: 0.3].
    #[arg(long)]
    pub psi0: Option<f64>,
    /// Energy of the x oscillation (k1map).
    #[arg(long)]
    pub e1: Option<f64>,
    /// Phase difference of the two cartesian oscillations (k1map).
    #[arg(long = "S")]
    pub s: Option<f64>,
    /// Trace file to verify instead of integrating (csv or json).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Draw the orbit in every sector of the full turn.
    #[arg(long)]
    pub all_sectors: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Trace,
    Orbit,
    Verify,
    Singular,
    Figure,
    K1Map,
}

/// Fully resolved inputs of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub mode: Mode,
    pub params: SystemParams,
    pub energy: Option<f64>,
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub cartesian: Option<CartesianConstants>,
    pub phi0: Option<f64>,
    pub r0: Option<f64>,
    pub psi0: Option<f64>,
    pub t_end: Option<f64>,
    pub samples: Option<usize>,
    pub root: Option<usize>,
    pub sectors: Option<Vec<i64>>,
    pub all_sectors: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub preset: Option<String>,
    pub input: Option<PathBuf>,
}

impl RunSpec {
    pub fn from_options(mode: Mode, o: &Options) -> crate::Result<Self> {
        let mut omega = 2.0;
        let mut alpha = 3.0;
        let mut beta = 2.0;
        let mut k = Rational::integer(1)?;
        let (mut energy, mut a, mut c, mut root, mut sectors) = (None, None, None, None, None);
        if mode != Mode::Figure {
            if let Some(id) = &o.preset {
                match figure(id)? {
                    Figure::Orbit(p) => {
                        (omega, alpha, beta, k) =
                            (p.params.omega, p.params.alpha, p.params.beta, p.params.k);
                        energy = Some(p.energy);
                        a = Some(p.a);
                        c = Some(p.c);
                        root = p.root;
                        sectors = Some(p.sectors);
                    }
                    Figure::RegionMap(p) => {
                        (omega, alpha, beta, k) =
                            (p.params.omega, p.params.alpha, p.params.beta, p.params.k);
                        energy = Some(p.energy);
                    }
                }
            }
        }
        let params = SystemParams::new(
            o.omega.unwrap_or(omega),
            o.alpha.unwrap_or(alpha),
            o.beta.unwrap_or(beta),
            o.k.unwrap_or(k),
        )?;
        let energy = o.energy.or(energy);
        let cartesian = match (o.e1, o.s) {
            (Some(e1), Some(s)) => {
                let e = energy.ok_or_else(|| missing("energy"))?;
                Some(CartesianConstants::from_phase_difference(
                    e1,
                    e - e1,
                    s,
                    &params,
                )?)
            }
            (None, None) => None,
            _ => {
                return Err(Error::InvalidParams(
                    "--e1 and --S must be given together".into(),
                ))
            }
        };
        if let Some(c) = o.c {
            if !(0.0..=std::f64::consts::PI).contains(&c) {
                return Err(Error::InvalidParams(format!("C = {c} must lie in [0, pi]")));
            }
        }
        if o.samples == Some(0) {
            return Err(Error::InvalidParams("--samples must be positive".into()));
        }
        Ok(Self {
            mode,
            params,
            energy,
            a: o.a.or(a),
            c: o.c.or(c),
            cartesian,
            phi0: o.phi0,
            r0: o.r0,
            psi0: o.psi0,
            t_end: o.t_end,
            samples: o.samples,
            root: o.root.or(root),
            sectors,
            all_sectors: o.all_sectors,
            out: o.out.clone(),
            format: o.format,
            preset: o.preset.clone(),
            input: o.input.clone(),
        })
    }

    pub fn energy(&self) -> crate::Result<f64> {
        self.energy.ok_or_else(|| missing("energy"))
    }

    pub fn a(&self) -> crate::Result<f64> {
        self.a.ok_or_else(|| missing("A"))
    }

    pub fn c(&self) -> crate::Result<f64> {
        self.c.ok_or_else(|| missing("C"))
    }
}

fn missing(flag: &str) -> Error {
    Error::InvalidParams(format!("--{flag} is required (or use --preset)"))
}

/// Error of a command together with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::StepFailure { .. } | Error::SectorWall { .. } => EXIT_INTEGRATION,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<(), Failure> {
    let (mode, opts) = match &cli.command {
        Command::Trace(o) => (Mode::Trace, o),
        Command::Orbit(o) => (Mode::Orbit, o),
        Command::Verify(o) => (Mode::Verify, o),
        Command::Singular(o) => (Mode::Singular, o),
        Command::Figures(o) => (Mode::Figure, o),
        Command::K1map(o) => (Mode::K1Map, o),
    };
    let spec = RunSpec::from_options(mode, opts)?;
    match mode {
        Mode::Trace => commands::trace(&spec),
        Mode::Orbit => commands::orbit(&spec),
        Mode::Verify => commands::verify(&spec),
        Mode::Singular => commands::singular(&spec),
        Mode::Figure => commands::figures(&spec),
        Mode::K1Map => commands::k1map(&spec),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors are reported on standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("ttw-orbits: {}", f.message);
            f.code
        }
    }
}
