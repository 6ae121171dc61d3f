use std::process::ExitCode;

use clap::Parser;
use loggas::cli::{parse_error, Cli, Invocation};
use loggas::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&parse_error(e)),
    };
    let result = cli.into_invocation().and_then(|inv| match inv {
        Invocation::Run { config, out, seed_generated } => loggas::run(&config, &out, seed_generated),
        Invocation::Replay { manifest, out } => loggas::replay(&manifest, &out),
    });
    match result {
        Ok(report) => {
            println!("{}", serde_json::to_string(&report).unwrap_or_default());
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}
