//! `wavemetro`: synthesize SSB captures, detect cells, report exposure,
//! post-process channel-sounder sweeps and run OTA simulations.
//!
//! Exit status: 0 on success, 1 on an input or format error, 2 when a run
//! completes cleanly without findings.

mod commands;
mod config;
mod formats;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Outcome;

#[derive(Debug, Parser)]
#[command(name = "wavemetro", version, about = "Radio metrology toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. They override the config file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct GlobalArgs {
    /// JSON config file; unknown keys are rejected.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,

    /// PSS detection threshold.
    #[arg(long, global = true, value_name = "F")]
    pub threshold: Option<f64>,

    /// Sweep window: rectangular, hann or hamming.
    #[arg(long, global = true, value_name = "NAME")]
    pub window: Option<String>,

    /// Zero-padding factor of the delay transform.
    #[arg(long, global = true, value_name = "N")]
    pub pad: Option<usize>,

    /// Output path; reports go to stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize an SSB capture and its sidecar.
    Generate(commands::generate::Args),
    /// Blind cell search over a capture.
    Detect(commands::detect::Args),
    /// Code-selective power and exposure extrapolation.
    Exposure(commands::exposure::Args),
    /// Power delay profile and angle/delay map from sweeps.
    Sound(commands::sound::Args),
    /// Wireless-cable calibration or reverberation-chamber fading.
    Otasim(commands::otasim::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::NoFindings(msg)) => {
            eprintln!("wavemetro: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("wavemetro: error: {e:#}");
            ExitCode::from(1)
        }
    }
}
