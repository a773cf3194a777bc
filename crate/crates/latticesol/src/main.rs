use std::process::ExitCode;

use clap::Parser;
use latticesol::config::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match latticesol::commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("latticesol: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
