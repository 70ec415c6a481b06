fn main() {
    std::process::exit(robols::cli::main_with_args(std::env::args_os()));
}
