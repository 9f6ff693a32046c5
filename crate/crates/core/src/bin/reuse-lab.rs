fn main() {
    std::process::exit(reuse_lab::harness::cli::main_with_args(std::env::args_os()));
}
