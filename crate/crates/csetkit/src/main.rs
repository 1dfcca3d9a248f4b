use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(csetkit::cli::run(std::env::args()) as u8)
}
