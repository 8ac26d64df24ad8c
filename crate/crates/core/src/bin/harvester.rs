fn main() {
    std::process::exit(harvester_core::cli::main_with_args(std::env::args_os()));
}
