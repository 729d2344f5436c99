use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = clago::cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match clago::cli::run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
