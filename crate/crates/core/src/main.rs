fn main() {
    std::process::exit(symdom::cli::main_with_args(std::env::args_os()));
}
