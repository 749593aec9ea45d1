use std::process::ExitCode;

use clap::Parser;
use epr_ga_cli::{run, Cli, CliError};

fn execute(cli: &Cli) -> Result<(), CliError> {
    let rendered = run(cli)?;
    for w in &rendered.warnings {
        eprintln!("{w}");
    }
    match &cli.common.out {
        Some(path) => std::fs::write(path, &rendered.document).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{}", rendered.document);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("epr-ga: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
