fn main() {
    std::process::exit(conegauge::cli::run(std::env::args_os()));
}
