fn main() {
    std::process::exit(mellin_kit::cli::run(std::env::args_os()));
}
