fn main() {
    std::process::exit(conewave::cli::run(std::env::args_os()));
}
