fn main() {
    std::process::exit(ecss::cli::run(std::env::args_os()));
}
