//! Entry point: parse arguments, dispatch, map errors to exit codes
//! (0 success, 1 internal failure, 2 usage/configuration error).

mod args;
mod common;
mod detect;
mod filter;
mod hist;
mod stats;
mod sweep;
mod synth;

use clap::Parser;

use args::{Cli, Command};
use common::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Stats(args) => stats::run(args),
        Command::Detect(args) => detect::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Hist(args) => hist::run(args),
        Command::Synth(args) => synth::run(args),
        Command::Filter(args) => filter::run(args),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
