//! `mf`: command-line front end for the elliptic, monodromy, theta and
//! difference-equation routines of `mf-core`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
//! 3 numerical failure.

mod commands;
mod config;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mf_core::Error;

use config::{Overrides, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let input = matches!(
            e,
            Error::CoincidentPoints
                | Error::DegenerateInput(_)
                | Error::InvalidInput(_)
                | Error::SingularCenter(_)
                | Error::StepTooLarge(_)
                | Error::SingularityOnPath(_)
                | Error::InvalidLambda(_)
                | Error::InvalidA(_)
                | Error::InvalidForm(_)
                | Error::BranchRequired
                | Error::NotOnCurve(_)
                | Error::DegenerateForm
                | Error::SingularCurve(_)
        );
        if input {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

/// Rendered command output and whether every check in it passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

#[derive(Debug, Parser)]
#[command(
    name = "mf",
    version,
    about = "Elliptic normal forms, monodromy, theta functions and difference equations"
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// g2, g3, discriminant, j and the lambda orbit
    Invariants(commands::InvariantsArgs),
    /// Move a curve between the Weierstrass, lambda, Legendre and b forms
    Convert(commands::ConvertArgs),
    /// Monodromy permutations of an algebraic function y(z)
    Monodromy(commands::MonodromyArgs),
    /// Coset action of a congruence subgroup inside a larger one
    Cosets(commands::CosetsArgs),
    /// Theta function with characteristic
    Theta(commands::ThetaArgs),
    /// Solve g(z+1) - g(z) = f(z) for polynomial f
    Diffeq(commands::DiffeqArgs),
    /// Analytic continuation of a built-in germ along a path
    Continue(commands::ContinueArgs),
    /// Run a relation suite; exit status 1 if any check fails
    Verify(verify::VerifyArgs),
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let env = std::env::var_os("MF_CONFIG").map(PathBuf::from);
    let cfg = RunConfig::load(env.as_deref(), &cli.overrides)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("cannot start {n} worker threads: {e}")))?;
    }
    match &cli.command {
        Command::Invariants(a) => commands::invariants(a, &cfg),
        Command::Convert(a) => commands::convert(a, &cfg),
        Command::Monodromy(a) => commands::monodromy(a, &cfg),
        Command::Cosets(a) => commands::cosets(a, &cfg),
        Command::Theta(a) => commands::theta(a, &cfg),
        Command::Diffeq(a) => commands::diffeq(a, &cfg),
        Command::Continue(a) => commands::continue_germ(a, &cfg),
        Command::Verify(a) => verify::run(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(3);
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
