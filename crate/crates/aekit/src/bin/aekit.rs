fn main() {
    std::process::exit(aekit::cli::run_cli(std::env::args()));
}
