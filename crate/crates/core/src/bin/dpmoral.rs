fn main() {
    std::process::exit(dpmoral::cli::main_with_args(std::env::args_os()));
}
