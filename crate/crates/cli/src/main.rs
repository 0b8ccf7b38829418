mod args;
mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, OutputFormat};
use commands::{run, CliError, Settings};
use report::Report;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = Settings {
        tol: cli.tol,
        seed: cli.seed.unwrap_or(0),
        verbose: cli.verbose,
        input_format: cli.input_format,
    };
    let name = cli.command.name();
    let out = match run(&cli.command, &settings) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("chains {name}: {e}");
            return ExitCode::from(e.exit_code());
        }
    };

    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let written = match cli.format {
        OutputFormat::Json => {
            let report = Report {
                command: name.to_string(),
                input_digest: out.digest,
                result: out.result,
                tolerances: out.tolerances,
            };
            lock.write_all(report.to_json().as_bytes()).map_err(|e| e.to_string())
        }
        OutputFormat::Csv => match out.table {
            Some(table) => table.write(&mut lock).map_err(|e| e.to_string()),
            None => {
                let e = CliError::Usage(format!("{name} has no CSV output"));
                eprintln!("chains {name}: {e}");
                return ExitCode::from(e.exit_code());
            }
        },
    };
    if let Err(e) = written {
        eprintln!("chains {name}: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
