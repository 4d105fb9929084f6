fn main() {
    std::process::exit(freests::cli::run(std::env::args_os()));
}
