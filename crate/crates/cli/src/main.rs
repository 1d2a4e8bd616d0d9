fn main() {
    std::process::exit(kazlab_cli::main_with_args(std::env::args_os()));
}
