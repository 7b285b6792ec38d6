fn main() {
    std::process::exit(piilab::cli::run(std::env::args_os()));
}
