fn main() {
    std::process::exit(harmolec::cli::main_with_args(std::env::args_os()));
}
