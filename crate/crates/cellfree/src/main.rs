fn main() {
    std::process::exit(cellfree::cli::run(std::env::args_os()));
}
