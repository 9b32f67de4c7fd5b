fn main() {
    std::process::exit(tridistill::cli::main_with_args(std::env::args_os()));
}
