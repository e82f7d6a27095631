mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Failure;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match &cli.command {
        Command::Wigner(a) => commands::wigner(a),
        Command::Starexp(a) => commands::starexp(a),
        Command::Propagator(a) => commands::propagator(a),
        Command::Star(a) => commands::star(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Validate(a) => commands::validate(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Criteria(n)) => {
            eprintln!("{n} criteria failed");
            ExitCode::from(1)
        }
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("numerical-domain error: {m}");
            ExitCode::from(3)
        }
    }
}
