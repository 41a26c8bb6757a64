use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use eulerseries_cli::{run_with_threads, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run_with_threads(&cli, cli.threads);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
