use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hsurf_cli::{run, Cli, RunRequest};

fn main() -> ExitCode {
    // Usage errors exit 1; clap's default of 2 is reserved for internal failures.
    let request: RunRequest = match Cli::try_parse() {
        Ok(cli) => cli.into(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    let outcome = run(&request);
    let mut out = std::io::stdout().lock();
    if out.write_all(outcome.stdout.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.exit_code as u8)
}
