fn main() {
    std::process::exit(vulnmap::cli::run(std::env::args_os()));
}
