fn main() {
    std::process::exit(kottsep_cli::run(std::env::args_os()));
}
