//! `brc`: rate regions and bounds for the DF/CF broadcast relay channel.

mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::grid::{GridSpec, Sweep};

#[derive(Parser, Debug)]
#[command(
    name = "brc",
    version,
    about = "Rate regions and bounds for the DF/CF broadcast relay channel"
)]
pub struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Logarithm base of every reported rate; overrides the config's unit.
    #[arg(long, global = true, value_enum)]
    pub log_base: Option<LogBase>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LogBase {
    #[value(name = "2")]
    Two,
    #[value(name = "e")]
    E,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Common-rate lower and cut-set upper bounds, optionally swept over relay-1 position.
    CommonRate {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        /// Relay-1 sweep, e.g. `d1=0.05:0.95:0.05`.
        #[arg(long, value_name = "SPEC")]
        sweep: Option<Sweep>,
    },
    /// Best private rate pairs of both dirty-paper cases over the power split.
    PrivateFrontier {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        /// Power-split grid: a point count or `start:stop:step`.
        #[arg(long, default_value = "101", value_name = "N")]
        alpha_steps: GridSpec,
    },
    /// Expected rate of each strategy over the state probability.
    ExpectedRate {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        /// Probability grid: a point count or `start:stop:step`.
        #[arg(long, default_value = "101", value_name = "N")]
        p_steps: GridSpec,
        #[arg(long, default_value = "101", value_name = "N")]
        alpha_steps: GridSpec,
    },
    /// Membership of a rate triple in the five-inequality region.
    Region {
        /// Information quantities JSON.
        #[arg(long, alias = "quantities", value_name = "PATH")]
        config: PathBuf,
        /// Rate triple `r0,r1,r2`.
        #[arg(long, value_name = "R0,R1,R2", allow_hyphen_values = true)]
        point: String,
    },
    /// Cross-checks the eliminated coding constraints against the region on random instances.
    FmVerify {
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Exit status classes.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or invalid input: exit 2.
    Usage(String),
    /// A verification ran and found a mismatch: exit 1.
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Verification(_) => 1,
        }
    }
}

impl From<brc_core::Error> for Failure {
    fn from(e: brc_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
