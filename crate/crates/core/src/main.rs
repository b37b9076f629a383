fn main() {
    std::process::exit(chowquot::cli::main_with_args(std::env::args_os()));
}
