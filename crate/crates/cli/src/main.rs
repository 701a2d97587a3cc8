//! Command-line front end for the beauville-core library.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "beauville",
    version,
    about = "Exact lattice and intersection-number checks for irreducible symplectic varieties"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the table of known deformation types.
    Table {
        /// Check every row and print PASS/FAIL.
        #[arg(long)]
        verify: bool,
        /// Show a single family (hilb, kummer, og6, og10).
        #[arg(long, requires = "n")]
        family: Option<String>,
        /// Half-dimension for --family.
        #[arg(long, requires = "family")]
        n: Option<u32>,
    },
    /// Invariants of a lattice expression such as "U^3 + -E8^2 + Lambda".
    Lattice { expr: String },
    /// Recover the Beauville form and Fujiki constant from intersection data.
    ///
    /// Pass a JSON file or the built-in name `og10_intersections`.
    Solve { input: String },
    /// Evaluate a polarized Fujiki integral described by a JSON file.
    Fujiki { input: PathBuf },
    /// Dimension of the monodromy-invariant degree-q cohomology of a genus-p curve.
    Monodromy {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        degree: usize,
        /// Compute the kernel of the wedge power minus the identity (default).
        #[arg(long, conflicts_with = "closed_form")]
        brute_force: bool,
        /// Use the closed formula (q = 1 or 2 only).
        #[arg(long)]
        closed_form: bool,
    },
    /// Replay the derivation of b2 = 24 for the ten-dimensional example.
    DeriveB2 {
        /// Override b2 of the ambient moduli space.
        #[arg(long, default_value_t = 23)]
        ambient_b2: u64,
        /// Override the number of divisor components.
        #[arg(long, default_value_t = 2)]
        components: u64,
        /// Override the known lower bound.
        #[arg(long, default_value_t = 24)]
        lower_bound: u64,
    },
    /// Propagate a ledger scenario file.
    Ledger { input: PathBuf },
}

/// Failure of a subcommand, with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input (exit 2).
    Input(String),
    /// A check did not hold (exit 1).
    Failed(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
