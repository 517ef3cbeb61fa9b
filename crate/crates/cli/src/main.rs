//! `emdual`: trajectories, spectra, Bogolubov coefficients, particle counts,
//! energies and thermality verdicts from the command line.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 configuration error,
//! 3 gate failure, 4 unsupported combination.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CliError, Context, Output};
use config::Settings;

const EXIT_GATE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "emdual", version, about = "Electron-mirror duality calculator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kinematic state along the worldline
    Trajectory,
    /// Photon spectral distribution dI/dΩ on an (ω, θ) grid
    Spectrum,
    /// Mirror |β_pq|² on a (p, q) grid
    Beta,
    /// Walker-Davies particle spectrum and total count
    Particles,
    /// Total radiated energy by every route
    Energy,
    /// Planck/Wien temperature fit and verdict
    Thermal,
    /// Mirror-recipe versus closed-form spectra
    DualityCheck,
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let settings = cli.settings.resolve()?;
    let ctx = Context::new(settings)?;
    match cli.command {
        Command::Trajectory => commands::cmd_trajectory(&ctx),
        Command::Spectrum => commands::cmd_spectrum(&ctx),
        Command::Beta => commands::cmd_beta(&ctx),
        Command::Particles => commands::cmd_particles(&ctx),
        Command::Energy => commands::cmd_energy(&ctx),
        Command::Thermal => commands::cmd_thermal(&ctx),
        Command::DualityCheck => commands::cmd_duality_check(&ctx),
    }
    .and_then(|out| {
        write_output(&ctx, &out.text)?;
        Ok(out)
    })
}

fn write_output(ctx: &Context, text: &str) -> Result<(), CliError> {
    match &ctx.settings.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) if out.gate_passed => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("emdual: numerical gate failed");
            ExitCode::from(EXIT_GATE)
        }
        Err(e) => {
            eprintln!("emdual: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
