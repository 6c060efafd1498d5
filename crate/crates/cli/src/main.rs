use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fockorder::cli::{run, Cli, UsageError, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let code = match run(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() { EXIT_USAGE } else { 1 }
        }
    };
    let _ = lock.flush();
    ExitCode::from(code as u8)
}
