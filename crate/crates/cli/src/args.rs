use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use kida::rsfamily::Phi5Form;

#[derive(Debug, Parser)]
#[command(
    name = "kida",
    version,
    about = "Search for 5-congruent curves and evaluate λ-invariant formulas"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the Pollard rho constants.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableForm {
    AsTabulated,
    Symmetrized,
}

impl From<TableForm> for Phi5Form {
    fn from(form: TableForm) -> Self {
        match form {
            TableForm::AsTabulated => Phi5Form::AsTabulated,
            TableForm::Symmetrized => Phi5Form::Symmetrized,
        }
    }
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Skip the discriminant admissibility check.
    #[arg(long)]
    pub no_admissibility: bool,
    /// How to read the modular polynomial table.
    #[arg(long, value_enum, default_value_t = TableForm::AsTabulated)]
    pub phi5: TableForm,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the primes up to a bound that pass every filter condition.
    Sieve {
        #[arg(long)]
        bound: u64,
        /// Reuse or write a prime cache at this path.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Find or check a parameter t with every given prime dividing f(t).
    FindT {
        #[arg(long, num_args = 1.., required = true)]
        primes: Vec<u64>,
        /// Check this t instead of searching.
        #[arg(long, allow_negative_numbers = true)]
        check_t: Option<BigInt>,
        /// Candidates to try, in increasing order of t.
        #[arg(long, default_value_t = 40)]
        max_candidates: usize,
        /// Pollard rho steps per attempt.
        #[arg(long)]
        rho_budget: Option<u64>,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Evaluate the Kida-type λ formula for a tower described in TOML.
    Kida { file: PathBuf },
    /// Evaluate a corank ledger for two congruent curves described in TOML.
    Ledger { file: PathBuf },
}
