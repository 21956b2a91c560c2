use std::process::ExitCode;

use clap::Parser;
use modp_fgl::cli::{self, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let outcome = cli::run(&args);
    if outcome.exit == EXIT_USAGE {
        eprint!("{}", outcome.summary);
    } else {
        print!("{}", outcome.summary);
    }
    ExitCode::from(outcome.exit)
}
