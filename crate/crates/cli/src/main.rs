use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fraccover_cli::commands::{execute, Cli};
use fraccover_cli::EXIT_ERROR;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result_dir = std::env::var_os("RESULT_DIR").map(PathBuf::from);
    let out = execute(cli, result_dir.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
