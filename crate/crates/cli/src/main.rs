fn main() {
    std::process::exit(cpe_cli::cli_main(std::env::args_os()));
}
