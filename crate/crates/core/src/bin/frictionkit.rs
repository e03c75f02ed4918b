fn main() {
    std::process::exit(frictionkit::cli::main_with_args(std::env::args_os()));
}
