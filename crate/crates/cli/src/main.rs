//! `qvalues` command-line front end.
//!
//! Exit status: 0 when every residual is within its limit, 1 when one is
//! not (each offender is named on stderr), 2 for usage errors.

mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    Common, DhArgs, EprArgs, FixtureArgs, LocalityArgs, OutputFormat, QubitPairArgs, StarArgs,
    UsageError, ValueArgs,
};

#[derive(Debug, Parser)]
#[command(name = "qvalues", version, about = "Values of quantum observables: DH matrices and noncommutative values")]
struct Cli {
    /// Limit for residuals of exact identities.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Noncommutative value {f; V} of an observable at a state.
    NcValue(ValueArgs),
    /// Deutsch-Hayden matrix value U^dag B U for a chosen completion U.
    DhValue(DhArgs),
    /// Seeded check of the product rules for both kinds of value.
    StarCheck(StarArgs),
    /// Seeded check that local values ignore processes on other factors.
    LocalityCheck(LocalityArgs),
    /// Two-qubit family: values of the local Pauli observables, reduced
    /// states and the CNOT pointer analysis.
    TwoQubit(QubitPairArgs),
    /// Two particles on a periodic grid in a regularized EPR state.
    EprGrid(EprArgs),
    /// Compare (or with --regen, rewrite) the golden two-qubit fixtures.
    Fixtures(FixtureArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        eprintln!("error: --tolerance must be positive");
        return ExitCode::from(2);
    }
    let common = Common {
        tolerance: cli.tolerance,
        seed: cli.seed,
    };
    let result = match &cli.command {
        Command::NcValue(a) => commands::nc_value_cmd(common, a),
        Command::DhValue(a) => commands::dh_value_cmd(common, a),
        Command::StarCheck(a) => commands::star_check_cmd(common, a),
        Command::LocalityCheck(a) => commands::locality_check_cmd(common, a),
        Command::TwoQubit(a) => commands::two_qubit_cmd(common, a),
        Command::EprGrid(a) => commands::epr_grid_cmd(common, a),
        Command::Fixtures(a) => commands::fixtures_cmd(common, a),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.output {
        OutputFormat::Json => outcome.to_json(),
        OutputFormat::Table => outcome.to_table(),
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).is_err() {
        return ExitCode::from(2);
    }
    if outcome.pass() {
        ExitCode::SUCCESS
    } else {
        for c in outcome.failures() {
            eprintln!("residual {} = {:e} exceeds {:e}", c.name, c.value, c.tol);
        }
        ExitCode::from(1)
    }
}
