use std::process::ExitCode;

fn main() -> ExitCode {
    rdnet::cli::main()
}
