/// Prints to stderr when `--verbose` is set.
macro_rules! note {
    ($global:expr, $($arg:tt)*) => {
        if $global.verbose {
            eprintln!($($arg)*);
        }
    };
}

pub mod detect;
pub mod exposure;
pub mod generate;
pub mod otasim;
pub mod sound;

use anyhow::Result;

use crate::{Cli, Command};

/// How a command finished when it did not fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// The run was clean but found nothing to report on.
    NoFindings(String),
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Generate(args) => generate::run(&cli.global, args),
        Command::Detect(args) => detect::run(&cli.global, args),
        Command::Exposure(args) => exposure::run(&cli.global, args),
        Command::Sound(args) => sound::run(&cli.global, args),
        Command::Otasim(args) => otasim::run(&cli.global, args),
    }
}
