fn main() -> std::process::ExitCode {
    imprecise_lp::cli::main_with_args(std::env::args_os())
}
