use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use umbral_cli::{run, Cli, CliError, RunConfig, EXIT_PARSE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let output = cli.global.output.clone();
    let outcome = RunConfig::from_cli(cli).and_then(|config| run(&config));
    match outcome {
        Ok(outcome) => {
            let written = match &output {
                Some(path) => std::fs::write(path, &outcome.report),
                None => std::io::stdout().write_all(outcome.report.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("cannot write report: {e}");
                return ExitCode::from(umbral_cli::EXIT_VALIDATION);
            }
            ExitCode::from(outcome.status)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(CliError::exit_code(&e))
        }
    }
}
