use std::process::ExitCode;

fn main() -> ExitCode {
    epsilon_forge::cli::run(std::env::args_os())
}
