use std::process::ExitCode;

use clap::Parser;
use siegelfc_cli::cli::Cli;
use siegelfc_cli::commands;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("siegelfc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
