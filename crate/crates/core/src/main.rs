fn main() {
    std::process::exit(latpoly::cli::run(std::env::args_os()));
}
