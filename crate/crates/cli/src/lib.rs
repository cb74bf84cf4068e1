//! Command-line front end: bound tables, parameter sweeps, Monte Carlo runs
//! and sample-file analysis, written as CSV.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use args::{Cli, Command};
use commands::Psk3Methods;
use config::Settings;
pub use error::CliError;

/// Runs one parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(error::CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| error::CliError::Usage(format!("cannot start worker threads: {e}")))?;
    pool.install(|| execute(cli.command))
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Bounds(a) => {
            let s = Settings::resolve(&a)?;
            commands::bounds_table(s.require_n_mean()?)?.write(s.out.as_deref())
        }
        Command::Sweep(a) => sweep(Settings::resolve(&a)?),
        Command::Ask3(a) => sweep(with_format(Settings::resolve(&a)?, sqzbpsk::Alphabet::Ask3)),
        Command::Psk4(a) => sweep(with_format(Settings::resolve(&a)?, sqzbpsk::Alphabet::Psk4)),
        Command::Psk3(a) => {
            let s = Settings::resolve(&a.common)?;
            commands::psk3_table(&s, Psk3Methods::parse(&a.methods)?)?.write(s.out.as_deref())
        }
        Command::Mc(a) => {
            let s = Settings::resolve(&a.common)?;
            let rows = commands::mc_rows(&s, a.dump_dir.as_deref())?;
            table::ResultRow::table(&rows).write(s.out.as_deref())
        }
        Command::Analyze(a) => commands::analyze_table(&a.file_0, &a.file_1)?.write(a.out.as_deref()),
        Command::Crossover(a) => commands::crossover_table()?.write(a.out.as_deref()),
    }
}

fn sweep(settings: Settings) -> Result<(), CliError> {
    let rows = commands::sweep_rows(&settings)?;
    table::ResultRow::table(&rows).write(settings.out.as_deref())
}

fn with_format(mut settings: Settings, format: sqzbpsk::Alphabet) -> Settings {
    settings.format = format;
    settings
}
