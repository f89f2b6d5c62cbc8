fn main() {
    std::process::exit(qgsw::cli::run(std::env::args_os()));
}
