mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const HOLDS: u8 = 0;
    pub const VIOLATED: u8 = 1;
    pub const RESOURCE_LIMIT: u8 = 2;
    pub const INPUT_ERROR: u8 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "hefcheck",
    version,
    about = "Structural analysis of disjunctive logic programs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Refuse programs with more atoms than this.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub max_atoms: u64,

    /// Largest set decided by subset enumeration (also caps stable-model search).
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..=30))]
    pub max_subset: u64,

    /// Wall-clock budget for a search, in seconds.
    #[arg(long, global = true, default_value_t = 600, value_parser = clap::value_parser!(u64).range(1..))]
    pub time_budget: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Hcf,
    Hef,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether a program is head-cycle-free or HEF.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Hef)]
        mode: Mode,
        /// Write the certificate here when the program is not HEF.
        #[arg(long, value_name = "PATH")]
        certificate: Option<PathBuf>,
        /// Write the positive dependency graph in DOT format.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Decide whether a set of atoms is elementary.
    Elementary {
        file: PathBuf,
        /// Comma-separated atom names.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Check a certificate against a program.
    Verify { file: PathBuf, certificate: PathBuf },
    /// Print the stable models, one per line.
    Stable { file: PathBuf },
    /// Print the program with disjunctions shifted into negated bodies.
    Shift { file: PathBuf },
    /// Build the program for a 3-CNF formula.
    Reduce {
        cnf: PathBuf,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Check satisfiability against the HEF verdict of the built program.
    Xvalidate {
        #[arg(required = true)]
        cnf: Vec<PathBuf>,
        /// Write the JSON report here.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("HEFCHECK_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            anyhow::anyhow!("HEFCHECK_THREADS must be a positive integer, got `{value}`")
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() {
                exit::INPUT_ERROR
            } else {
                exit::HOLDS
            });
        }
    };
    let result = configure_threads().and_then(|()| commands::run(&cli));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit::INPUT_ERROR)
        }
    }
}
