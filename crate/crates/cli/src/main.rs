use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = alwabp_cli::Cli::parse();
    match alwabp_cli::run(&cli) {
        Ok(outcome) if outcome.failures == 0 => ExitCode::SUCCESS,
        Ok(outcome) => {
            eprintln!("{} failures", outcome.failures);
            ExitCode::FAILURE
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
