fn main() {
    std::process::exit(ssk::cli::main_from_args(std::env::args_os()));
}
