//! Batch front-end over the entanglement library: temperature sweeps of the
//! negativity lower bound and exact small-truncation verification runs.
//!
//! Exit codes: 0 success, 1 any sweep row or certificate failed, 2 bad
//! configuration or IO.

mod config;
mod fmt;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bosonsplit",
    version,
    about = "Spatial entanglement of an average thermal boson pair across a left/right cut of a harmonic trap"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the negativity lower bound over a temperature grid
    Sweep(sweep::SweepArgs),
    /// Run exact small-truncation certificates and write a JSON report
    Verify(verify::VerifyArgs),
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sweep(args) => sweep::run(args),
        Command::Verify(args) => verify::run(args),
    }
}
