use std::process::ExitCode;

fn main() -> ExitCode {
    mppenc::cli::main_from(std::env::args_os())
}
