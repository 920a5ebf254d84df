fn main() {
    std::process::exit(hke::cli::run(std::env::args_os()));
}
