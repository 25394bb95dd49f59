fn main() {
    std::process::exit(kummer_core::cli::main_with_args(std::env::args_os()));
}
