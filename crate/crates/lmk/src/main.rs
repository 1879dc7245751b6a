fn main() {
    std::process::exit(lmk::cli::run(std::env::args_os()));
}
