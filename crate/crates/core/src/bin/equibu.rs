fn main() {
    std::process::exit(equibu::cli_io::main_with_args(std::env::args_os()));
}
