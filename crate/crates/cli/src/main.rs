fn main() {
    std::process::exit(catenary_cli::run(std::env::args_os()));
}
