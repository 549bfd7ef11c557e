fn main() {
    std::process::exit(specsup::cli::run(std::env::args_os()));
}
