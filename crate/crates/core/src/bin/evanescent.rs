fn main() {
    std::process::exit(evanescent::cli::main_with_args(std::env::args_os()));
}
