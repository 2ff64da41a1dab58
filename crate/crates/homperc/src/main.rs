fn main() {
    std::process::exit(homperc::cli::main_with_args(std::env::args_os()));
}
