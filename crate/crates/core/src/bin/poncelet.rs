fn main() {
    std::process::exit(poncelet::cli::run(std::env::args_os()));
}
