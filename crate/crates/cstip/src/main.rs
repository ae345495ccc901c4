fn main() {
    std::process::exit(cstip::cli::run(std::env::args_os()));
}
