use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("RIPPLE_LOG", "warn")).init();
    ripple_mesh::cli::main_with_args(std::env::args_os())
}
