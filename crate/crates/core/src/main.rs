use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use entchain::cli::{exit_code, run, Cli, EXIT_NUMERICAL};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(report.render(cli.format).as_bytes());
            if report.checks_passed() {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: consistency check exceeded tolerance {:e}", cli.tolerance);
                ExitCode::from(EXIT_NUMERICAL as u8)
            }
        }
        Err(err) => {
            eprintln!("error: {}", err);
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
