fn main() {
    std::process::exit(prefrank::cli::run(std::env::args_os()));
}
