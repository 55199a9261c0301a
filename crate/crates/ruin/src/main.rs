fn main() {
    std::process::exit(ruin::run_cli(std::env::args_os()));
}
