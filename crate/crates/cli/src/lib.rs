//! Command-line front end for the `eulerseries` engine.

pub mod commands;
pub mod document;
pub mod error;
pub mod expr;
pub mod output;
pub mod suites;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{Flags, Report};
use crate::error::CliError;

/// Exact Euler series, Hilbert series, trajectory differentials and zeta functions.
///
/// Exit codes: 0 success, 1 check failure, 2 input error, 3 engine limitation.
#[derive(Debug, Parser)]
#[command(name = "eulerseries", version)]
pub struct Cli {
    /// Print one JSON record instead of text.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Run a named invariant suite (repeatable; `all` runs every suite).
    #[arg(long = "check", value_name = "NAME")]
    pub check: Vec<String>,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = suites::DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, clap::Args, Clone, Default)]
pub struct EvalArgs {
    /// Evaluation point, a rational such as -1 or 3/4 (default -1).
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Use the critical value instead of plain evaluation.
    #[arg(long)]
    pub critical: bool,
    /// Report the (1 - t^2)^n t^m normal form.
    #[arg(long)]
    pub clear: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euler series, global series and reduced Euler numbers of sections.
    Euler {
        file: PathBuf,
        /// Only this section.
        #[arg(long)]
        section: Option<String>,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Hilbert series from Betti tables and Koszul resolutions.
    Hilbert {
        file: PathBuf,
        /// Highest weight listed.
        #[arg(long)]
        truncate: Option<u64>,
        /// Report the clearing numerator.
        #[arg(long)]
        clear: bool,
    },
    /// Trajectory differentials, d^2 relations and the splitting check.
    Traj {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long)]
        critical: bool,
    },
    /// Zeta function exp(-sum N_b/|b| z^b), truncated.
    Zeta {
        file: PathBuf,
        #[arg(long)]
        truncate: Option<u64>,
    },
    /// Critical value of a rational function of t.
    Critval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Run invariant suites by name.
    Check { names: Vec<String> },
    /// Print the document after a parse/serialize round trip.
    Fmt { file: PathBuf },
}

/// Everything a run prints, plus its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input("io", None, format!("{}: {e}", path.display())))
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    if !cli.check.is_empty() {
        if cli.command.is_some() {
            return Err(CliError::input("usage", None, "--check cannot be combined with a command"));
        }
        return commands::cmd_check(&cli.check, cli.seed);
    }
    let Some(cmd) = &cli.command else {
        return Err(CliError::input("usage", None, "no command given, see --help"));
    };
    let eval_flags = |e: &EvalArgs| Flags {
        at: e.at.clone(),
        critical: e.critical,
        clear: e.clear,
        truncate: None,
    };
    match cmd {
        Command::Euler { file, section, eval } => commands::cmd_euler(&read(file)?, section.as_deref(), &eval_flags(eval)),
        Command::Hilbert { file, truncate, clear } => commands::cmd_hilbert(
            &read(file)?,
            &Flags {
                truncate: *truncate,
                clear: *clear,
                ..Flags::default()
            },
        ),
        Command::Traj { file, at, critical } => commands::cmd_traj(
            &read(file)?,
            &Flags {
                at: at.clone(),
                critical: *critical,
                ..Flags::default()
            },
        ),
        Command::Zeta { file, truncate } => commands::cmd_zeta(
            &read(file)?,
            &Flags {
                truncate: *truncate,
                ..Flags::default()
            },
        ),
        Command::Critval { expr, eval } => commands::cmd_critval(expr, &eval_flags(eval)),
        Command::Check { names } => {
            let names = if names.is_empty() { vec!["all".to_string()] } else { names.clone() };
            commands::cmd_check(&names, cli.seed)
        }
        Command::Fmt { file } => commands::cmd_fmt(&read(file)?),
    }
}

/// Run a parsed command line on the current rayon pool.
pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(report) => {
            let stdout = if cli.machine {
                let mut s = serde_json::to_string(&report.json).expect("json values serialize");
                s.push('\n');
                s
            } else {
                report.text
            };
            match report.check_failed {
                Some(msg) => Outcome {
                    stdout,
                    stderr: format!("{}\n", CliError::check("check-failed", msg)),
                    code: 1,
                },
                None => Outcome {
                    stdout,
                    stderr: String::new(),
                    code: 0,
                },
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("{e}\n"),
            code: e.kind.exit_code(),
        },
    }
}

/// Run with a dedicated pool of `threads` workers (all cores when `None`).
pub fn run_with_threads(cli: &Cli, threads: Option<usize>) -> Outcome {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().expect("thread pool");
    pool.install(|| run(cli))
}
