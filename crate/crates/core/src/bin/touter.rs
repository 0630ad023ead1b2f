fn main() {
    std::process::exit(touter::cli::run(std::env::args_os()));
}
