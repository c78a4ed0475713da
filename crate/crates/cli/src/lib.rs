//! Command-line front end: config loading, subcommands, report writers and exit-code mapping.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use clap::{Parser, Subcommand};
use commands::RunFlags;
use config::{Format, RunConfig, CONFIG_ENV};
use error::CliError;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "asymwell", version, about = "Semiclassical and exact spectra of asymmetric double wells")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by the config-driven subcommands; they override the file.
#[derive(Debug, Clone, clap::Args)]
pub struct ConfigArgs {
    /// JSON run config; falls back to $ASYMWELL_CONFIG, then the built-in symmetric example.
    #[arg(long, short = 'c', env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file instead of standard output.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Oracle grid size.
    #[arg(long)]
    pub n_points: Option<usize>,
    /// Matching point inside the barrier.
    #[arg(long, allow_hyphen_values = true)]
    pub c_override: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Semiclassical pair energies side by side with the grid eigensolver.
    Spectrum {
        #[command(flatten)]
        args: ConfigArgs,
        /// Add per-row wall-clock timings (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// One report row per sweep point and level pair.
    Sweep {
        #[command(flatten)]
        args: ConfigArgs,
        /// Worker threads; rows stay in sweep order.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        timings: bool,
    },
    /// Evaluate the parabolic cylinder function D_nu(z).
    Pcf {
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run the invariant checks against the configured potential.
    Verify {
        #[command(flatten)]
        args: ConfigArgs,
    },
    /// Tabulate V(x) and V'(x) over the potential's domain.
    ExportPotential {
        #[command(flatten)]
        args: ConfigArgs,
        #[arg(long, default_value_t = 2001)]
        points: usize,
    },
}

/// Loads the config and applies command-line overrides.
pub fn resolve_config(args: &ConfigArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::symmetric_default(),
    };
    if let Some(f) = args.format {
        cfg.output.format = f;
    }
    if let Some(o) = &args.output {
        cfg.output.path = Some(o.clone());
    }
    if let Some(n) = args.n_points {
        cfg.grid.n_points = n;
    }
    if let Some(c) = args.c_override {
        cfg.c_override = Some(c);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn with_output<F>(cfg: &RunConfig, stdout: &mut dyn Write, f: F) -> Result<i32, CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<i32, CliError>,
{
    match &cfg.output.path {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            let code = f(&mut file)?;
            file.flush()?;
            Ok(code)
        }
        None => f(stdout),
    }
}

/// Runs a parsed command, writing reports to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Spectrum { args, timings } => {
            let cfg = resolve_config(&args)?;
            with_output(&cfg, stdout, |w| commands::spectrum(&cfg, RunFlags { jobs: 1, timings }, w))
        }
        Command::Sweep { args, jobs, timings } => {
            let cfg = resolve_config(&args)?;
            if jobs == 0 {
                return Err(CliError::Config("--jobs must be at least 1".into()));
            }
            with_output(&cfg, stdout, |w| commands::sweep(&cfg, RunFlags { jobs, timings }, w))
        }
        Command::Pcf { nu, z, format } => commands::pcf(nu, z, format, stdout),
        Command::Verify { args } => {
            let cfg = resolve_config(&args)?;
            with_output(&cfg, stdout, |w| commands::verify(&cfg, w))
        }
        Command::ExportPotential { args, points } => {
            let cfg = resolve_config(&args)?;
            with_output(&cfg, stdout, |w| commands::export_potential(&cfg, points, w))
        }
    }
}
