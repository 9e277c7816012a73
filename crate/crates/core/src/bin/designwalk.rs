fn main() {
    std::process::exit(designwalk::cli::main_with_args(std::env::args_os()));
}
