use std::io;
use std::process::ExitCode;

use threshold_lab::cli::{configure_threads, main_with_args, ExitStatus};

fn main() -> ExitCode {
    let stderr = io::stderr();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(ExitStatus::Usage.code() as u8);
    }
    let status = main_with_args(std::env::args_os(), &mut io::stdout().lock(), &mut stderr.lock());
    ExitCode::from(status.code() as u8)
}
