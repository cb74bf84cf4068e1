use std::process::ExitCode;

use clap::Parser;
use sqzbpsk_cli::args::Cli;

fn main() -> ExitCode {
    match sqzbpsk_cli::run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
