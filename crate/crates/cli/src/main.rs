//! `scns`: spectral stochastic Galerkin runs for the regularized compressible
//! Navier-Stokes system, with structure audits and stationarity reports.

mod artifacts;
mod commands;
mod config;
mod manifest;

use clap::{Parser, Subcommand};
use config::RunConfig;
use scns_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_VALIDATION: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "scns", version, about = "spectral stochastic compressible Navier-Stokes toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate one trajectory and write snapshots, trajectory CSV and the
    /// increment log.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit a finished run directory.
    Diagnose {
        /// Run directory produced by `simulate`.
        #[arg(long)]
        run: Option<PathBuf>,
        /// Config whose `[run] out` names the run directory.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated audits: energy,mass,renorm,evf,korn,lower-bound,ergodic.
        #[arg(long, value_delimiter = ',', required = true)]
        which: Vec<String>,
        /// Optional `t0,t1` window.
        #[arg(long)]
        window: Option<String>,
        /// Flux identity level for `evf`: epsilon (default) or delta.
        #[arg(long)]
        level: Option<String>,
        /// Exponent for the delta-level flux identity.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run an ensemble with burn-in and emit the two-view stationarity
    /// report.
    Stationarity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Replace the ensemble by the built-in non-stationary ramp control.
        #[arg(long)]
        ramp: bool,
    },
    /// Run a parameter sweep and tabulate stationary-regime statistics.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// epsilon | delta | N | R
        #[arg(long)]
        axis: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NegativeDensity { .. }
        | Error::StepFailed { .. }
        | Error::SolveDiverged { .. }
        | Error::SingularMass { .. } => EXIT_SOLVER,
        _ => EXIT_VALIDATION,
    }
}

fn parse_window(s: &str) -> Result<(f64, f64), Error> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::invalid("window", "expected `t0,t1`"))?;
    let lo = a
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::invalid("window", "t0 is not a number"))?;
    let hi = b
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::invalid("window", "t1 is not a number"))?;
    Ok((lo, hi))
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Simulate { config, out } => {
            let cfg = RunConfig::from_path(&config)?;
            commands::simulate::run(&cfg, out)?;
            Ok(EXIT_OK)
        }
        Cmd::Diagnose {
            run,
            config,
            which,
            window,
            level,
            alpha,
        } => {
            let run_dir = commands::diagnose::resolve_run_dir(run, config)?;
            let window = window.as_deref().map(parse_window).transpose()?;
            let args = commands::diagnose::DiagnoseArgs {
                run_dir,
                which,
                window,
                alpha,
                level,
            };
            let invariants_ok = commands::diagnose::run(&args)?;
            Ok(if invariants_ok { EXIT_OK } else { EXIT_INVARIANT })
        }
        Cmd::Stationarity {
            config,
            out,
            jobs,
            ramp,
        } => {
            let cfg = RunConfig::from_path(&config)?;
            commands::stationarity::run(&cfg, out, jobs, ramp)?;
            Ok(EXIT_OK)
        }
        Cmd::Sweep {
            config,
            axis,
            values,
            out,
            jobs,
        } => {
            let cfg = RunConfig::from_path(&config)?;
            let axis = commands::sweep::SweepAxis::parse(&axis)?;
            commands::sweep::run(&cfg, axis, &values, out, jobs)?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
