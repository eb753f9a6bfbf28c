fn main() {
    std::process::exit(artin::cli::run(std::env::args_os()));
}
