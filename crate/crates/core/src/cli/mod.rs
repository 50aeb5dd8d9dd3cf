//! Command-line front end. Exit codes: 0 success, 2 configuration error,
//! 3 numerical failure in at least one cell.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use commands::Rendered;
pub use config::{Format, Grid, ScanConfig, Spacing};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Si,
    Natural,
}

#[derive(Debug, Parser)]
#[command(name = "accel-qed", version, about = "Radiative interactions between uniformly accelerated atoms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML scan configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Interpret configuration values and print results in these units.
    #[arg(long, global = true, value_enum)]
    pub units: Option<Units>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Override one configuration entry, e.g. `--set geometry.separation.points=5`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Physical constants, Unruh temperature and Rindler length.
    Constants {
        /// Proper acceleration in m/s².
        #[arg(long, default_value_t = 9.8)]
        accel: f64,
    },
    /// Dispersion energy over the separation, acceleration and time grids.
    Dispersion,
    /// Resonance energy over the separation and acceleration grids.
    Resonance,
    /// Resonance energy next to a conducting plate.
    Mirror,
    /// Power-law exponent of one CSV column against another.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 0.0)]
        min: f64,
        #[arg(long, default_value_t = f64::INFINITY)]
        max: f64,
    },
    /// Local scaling exponents across the Rindler length.
    Crossover,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Convergence { .. } | Error::Fit(_) => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

/// Effective configuration: file (or defaults), `--set` entries, then named flags.
pub fn load_config(cli: &Cli) -> crate::Result<ScanConfig> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Configuration(format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut overrides = cli.overrides.clone();
    if let Some(units) = cli.units {
        overrides.push(format!("units = \"{}\"", if units == Units::Si { "si" } else { "natural" }));
    }
    if let Some(tol) = cli.tolerance {
        overrides.push(format!("numerics.tolerance = {tol:e}"));
    }
    if let Some(format) = cli.format {
        overrides.push(format!("output.format = \"{}\"", if format == Format::Csv { "csv" } else { "json" }));
    }
    if let Some(out) = &cli.out {
        overrides.push(format!("output.path = {}", toml::Value::String(out.display().to_string())));
    }
    ScanConfig::from_toml_with_overrides(&text, &overrides)
}

fn execute(cli: &Cli) -> crate::Result<(Rendered, Option<String>)> {
    // reports default to JSON, scans to the configured format
    let report_format = cli.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Constants { accel } => Ok((commands::constants(*accel, report_format)?, out_path(cli))),
        Command::Fit { input, x, y, min, max } => {
            let csv = std::fs::read_to_string(input)
                .map_err(|e| Error::Configuration(format!("cannot read {}: {e}", input.display())))?;
            Ok((commands::fit(&csv, x, y, (*min, *max), report_format)?, out_path(cli)))
        }
        command => {
            let config = load_config(cli)?;
            let path = config.output.path.clone();
            let rendered = match command {
                Command::Dispersion => commands::dispersion(&config, config.output.format)?,
                Command::Resonance => commands::resonance(&config, config.output.format)?,
                Command::Mirror => commands::mirror(&config, config.output.format)?,
                Command::Crossover => commands::crossover(&config, report_format)?,
                Command::Constants { .. } | Command::Fit { .. } => unreachable!("handled above"),
            };
            Ok((rendered, path))
        }
    }
}

fn out_path(cli: &Cli) -> Option<String> {
    cli.out.as_ref().map(|p| p.display().to_string())
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok((rendered, path)) => {
            match path {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, &rendered.text) {
                        eprintln!("error: cannot write {p}: {e}");
                        return EXIT_CONFIG;
                    }
                }
                None => print!("{}", rendered.text),
            }
            if rendered.flagged {
                eprintln!("error: at least one cell failed; see the status column");
                EXIT_NUMERICAL
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
