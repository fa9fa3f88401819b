use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = stratmean_cli::run_args(std::env::args_os());
    // A closed pipe is not worth reporting.
    let _ = std::io::stdout().write_all(result.stdout.as_bytes());
    let _ = std::io::stderr().write_all(result.stderr.as_bytes());
    ExitCode::from(result.status as u8)
}
