fn main() {
    std::process::exit(flatsing::cli::run(std::env::args_os()));
}
