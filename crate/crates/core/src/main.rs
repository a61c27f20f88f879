fn main() {
    std::process::exit(dcor::cli::run(std::env::args_os()));
}
