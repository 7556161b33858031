use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(polyan::run(std::env::args_os()) as u8)
}
