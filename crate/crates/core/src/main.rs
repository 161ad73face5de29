use std::io::Write;
use std::process::ExitCode;

use bergman_qc::cli::{execute, exit_code, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rendered = match execute(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &rendered),
        None => std::io::stdout().lock().write_all(rendered.as_bytes()),
    };
    if let Err(e) = written {
        // reader went away (`| head`): not our failure
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
