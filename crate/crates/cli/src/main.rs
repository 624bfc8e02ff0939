fn main() {
    std::process::exit(neststat_cli::main_with_args(std::env::args_os()));
}
