//! Reproducible experiments for log-normal random cascades.
//!
//! `simulate` draws one path of the field, measure and walk; `reproduce`
//! regenerates the data behind the covariance, variance and apparent
//! integral-scale figures; `analyze` runs daily OHLC bars through the
//! magnitude-covariance estimators. Every run writes `config.json` next to its
//! outputs.

pub mod analyze;
pub mod config;
pub mod error;
pub mod output;
pub mod reproduce;
pub mod simulate;
pub mod summary;
pub mod synth;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{resolve, CommandKind, Figure, Overrides};
pub use crate::error::{CliError, Result};
use crate::summary::Summary;

#[derive(Debug, Parser)]
#[command(name = "cascade", version, about = "Log-normal cascade simulation and estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample omega, the measure M and the walk X on one grid
    Simulate(Overrides),
    /// Regenerate the data behind a figure, with theory overlays and checks
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        #[command(flatten)]
        flags: Overrides,
    },
    /// Magnitude covariance and apparent integral scale of daily OHLC bars
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        flags: Overrides,
    },
    /// Write synthetic daily OHLC bars driven by the aging cascade
    SynthOhlc(Overrides),
}

pub fn run(cli: Cli) -> Result<Summary> {
    let cfg = match cli.command {
        Command::Simulate(flags) => resolve(CommandKind::Simulate, None, None, flags)?,
        Command::Reproduce { figure, flags } => resolve(CommandKind::Reproduce, Some(figure), None, flags)?,
        Command::Analyze { input, flags } => resolve(CommandKind::Analyze, None, Some(input), flags)?,
        Command::SynthOhlc(flags) => resolve(CommandKind::SynthOhlc, None, None, flags)?,
    };
    log::debug!("resolved configuration: {cfg:?}");
    match cfg.command {
        CommandKind::Simulate => simulate::run(&cfg),
        CommandKind::Reproduce => reproduce::run(&cfg),
        CommandKind::Analyze => analyze::run(&cfg),
        CommandKind::SynthOhlc => synth::run(&cfg),
    }
}
