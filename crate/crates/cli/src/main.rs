fn main() {
    std::process::exit(ptcalogero_cli::run(std::env::args_os()));
}
