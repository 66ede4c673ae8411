use std::process::ExitCode;

use clap::Parser;
use filippov_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli).and_then(|o| emit(&cli, &o).map(|()| o.exit_code())) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
