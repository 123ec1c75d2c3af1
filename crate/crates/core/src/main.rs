fn main() {
    std::process::exit(wqbern::cli::main_with_args(std::env::args_os()));
}
