fn main() {
    std::process::exit(shrinking_carpet::cli::run(std::env::args_os()));
}
