fn main() {
    std::process::exit(depnet::experiment::cli::cli_main(std::env::args_os()));
}
