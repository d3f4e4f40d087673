use std::process::ExitCode;

use clap::Parser;
use uepsim::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("uepsim: {e}");
            ExitCode::FAILURE
        }
    }
}
