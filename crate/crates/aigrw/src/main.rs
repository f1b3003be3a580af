fn main() {
    std::process::exit(aigrw::cli::run(std::env::args_os()));
}
