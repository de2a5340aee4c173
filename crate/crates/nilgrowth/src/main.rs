fn main() {
    std::process::exit(nilgrowth::cli::run(std::env::args_os()));
}
