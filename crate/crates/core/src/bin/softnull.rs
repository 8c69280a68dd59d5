fn main() {
    std::process::exit(softnull::experiments::cli_main(std::env::args_os()));
}
