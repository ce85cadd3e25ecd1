use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gaussq_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|report| {
        match &report.out {
            Some(path) => std::fs::write(path, &report.text)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?,
            None => std::io::stdout()
                .write_all(report.text.as_bytes())
                .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}")))?,
        }
        match report.invalid {
            Some(msg) => Err(CliError::Numerical(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gaussq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
