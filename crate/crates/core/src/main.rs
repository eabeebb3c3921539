//! `tatess`: localization spectral sequences for involutive chain
//! complexes over the two-element field.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tatess::cli::{self, SsOptions};

#[derive(Parser)]
#[command(
    name = "tatess",
    about = "Localization (Tate) spectral sequences of chain complexes with involution over GF(2)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every chain-level axiom of a complex file.
    Validate {
        /// Complex file to check.
        path: PathBuf,
    },
    /// Compute the spectral sequence and print the sector table.
    Ss {
        /// Complex file to run.
        path: PathBuf,
        /// Cap the number of computed pages.
        #[arg(long)]
        max_page: Option<u32>,
        /// Emit the machine-readable report instead of the table.
        #[arg(long)]
        json: bool,
        /// Restrict the run to one sector label.
        #[arg(long)]
        sector: Option<String>,
    },
    /// Print the per-sector Tate homology dimensions.
    Oracle {
        /// Complex file to run.
        path: PathBuf,
    },
    /// List the builtin complexes, or emit one as a complex file.
    Builtin {
        /// Registry name (omit to list the registry).
        name: Option<String>,
        /// Write the complex file here instead of stdout.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Equivariant self connected sum of two identical knot complexes.
    Sum {
        /// First summand file.
        path1: PathBuf,
        /// Second summand file (must equal the first).
        path2: PathBuf,
        /// Optional iota-correction fragment.
        #[arg(long)]
        correction: Option<PathBuf>,
        /// Write the sum here instead of stdout.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = match args.command {
        Command::Validate { path } => cli::cmd_validate(&path, &mut out, &mut err),
        Command::Ss {
            path,
            max_page,
            json,
            sector,
        } => cli::cmd_ss(
            &path,
            &SsOptions {
                max_page,
                json,
                sector,
            },
            &mut out,
            &mut err,
        ),
        Command::Oracle { path } => cli::cmd_oracle(&path, &mut out, &mut err),
        Command::Builtin { name, emit } => {
            cli::cmd_builtin(name.as_deref(), emit.as_deref(), &mut out, &mut err)
        }
        Command::Sum {
            path1,
            path2,
            correction,
            emit,
        } => cli::cmd_sum(
            &path1,
            &path2,
            correction.as_deref(),
            emit.as_deref(),
            &mut out,
            &mut err,
        ),
    };
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
