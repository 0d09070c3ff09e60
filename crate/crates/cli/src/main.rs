//! `kpzlab` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or i/o error, 2 numerical-tolerance
//! failure, 3 experiment acceptance failure.

mod args;
mod commands;
mod output;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, DEFAULT_SEED};
use commands::Context;
use output::Failure;

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let ctx = Context {
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        seed_explicit: cli.seed.is_some(),
        output: cli.output,
        format: cli.format,
        workers: cli.workers,
    };
    if cli.describe_numerics {
        return commands::describe_numerics(&ctx);
    }
    match &cli.command {
        Some(Command::Simulate(a)) => commands::simulate(&ctx, a),
        Some(Command::Exact(a)) => commands::exact(&ctx, a),
        Some(Command::Dist(a)) => commands::dist(&ctx, a),
        Some(Command::Experiment(a)) => commands::experiment(&ctx, a),
        Some(Command::Roots(a)) => commands::roots(&ctx, a),
        None => Err(Failure::Usage("a subcommand is required; see --help".into())),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            std::process::exit(code);
        }
    };
    if let Err(f) = dispatch(cli) {
        eprintln!("{f}");
        std::process::exit(f.code());
    }
}
