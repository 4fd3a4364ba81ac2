//! `breather-lab`: reproducible NLS breather experiments.
//!
//! Every subcommand prints a JSON report to stdout (or `--report`), writes its
//! CSV/JSON artifact to `--out` when given, and exits with 0 on success, 1
//! when a configured threshold fails, 2 on usage errors and 3 on I/O errors.

mod commands;
mod config;
mod defaults;
mod error;
mod report;

use std::env;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::conserved::Conserved;
use commands::eval::Eval;
use commands::evolve::Evolve;
use commands::hessian::Hessian;
use commands::instability::Scenario;
use commands::mi::Mi;
use commands::residual::Residual;
use commands::{run, Common};
use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "breather-lab", version, about = "Exact breathers of the focusing NLS on a Stokes background")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an exact solution to CSV
    Eval {
        #[command(flatten)]
        params: Eval,
        #[command(flatten)]
        common: Common,
    },
    /// Conserved functionals, optionally checked against closed forms
    Conserved {
        #[command(flatten)]
        params: Conserved,
        #[command(flatten)]
        common: Common,
    },
    /// Residual of the evolution equation or an elliptic equation
    Residual {
        #[command(flatten)]
        params: Residual,
        #[command(flatten)]
        common: Common,
    },
    /// Modulational-instability growth rates
    Mi {
        #[command(flatten)]
        params: Mi,
        #[command(flatten)]
        common: Common,
    },
    /// Instability experiments
    Instability {
        #[command(subcommand)]
        scenario: Scenario,
    },
    /// Restricted second variation of the Lyapunov functional
    Hessian {
        #[command(flatten)]
        params: Hessian,
        #[command(flatten)]
        common: Common,
    },
    /// Time evolution with diagnostics
    Evolve {
        #[command(flatten)]
        params: Evolve,
        #[command(flatten)]
        common: Common,
    },
}

const THREADS_VAR: &str = "BREATHER_LAB_THREADS";

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = env::var(THREADS_VAR) {
        let n = v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}

fn dispatch(command: &Command) -> CliResult<Option<bool>> {
    match command {
        Command::Eval { params, common } => run(params, common),
        Command::Conserved { params, common } => run(params, common),
        Command::Residual { params, common } => run(params, common),
        Command::Mi { params, common } => run(params, common),
        Command::Instability { scenario } => scenario.run(),
        Command::Hessian { params, common } => run(params, common),
        Command::Evolve { params, common } => run(params, common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = thread_pool().and_then(|pool| pool.install(|| dispatch(&cli.command)));
    match result {
        Ok(Some(false)) => {
            eprintln!("check failed");
            ExitCode::from(1)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("breather-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Cli;
    use clap::CommandFactory;

    #[test]
    fn command_tree_is_consistent() {
        Cli::command().debug_assert();
    }
}
