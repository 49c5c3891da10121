fn main() {
    std::process::exit(oddkit_cli::run(std::env::args_os()));
}
