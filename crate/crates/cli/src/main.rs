use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = monolab_cli::configure_threads() {
        eprintln!("monolab: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    ExitCode::from(monolab_cli::run(std::env::args_os()) as u8)
}
