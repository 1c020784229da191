use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use permoptics_cli::{exit, run, Cli};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors, matching the input-error code
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.stdout.as_bytes()).is_err() {
                return ExitCode::from(exit::IO as u8);
            }
            if !outcome.summary.is_empty() {
                eprintln!("{}", outcome.summary);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
