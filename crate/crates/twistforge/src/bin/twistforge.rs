fn main() {
    std::process::exit(twistforge::cli::run_from(std::env::args_os()));
}
