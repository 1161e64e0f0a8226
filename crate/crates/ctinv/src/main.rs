fn main() {
    std::process::exit(ctinv::cli::main_with_args(std::env::args_os()));
}
