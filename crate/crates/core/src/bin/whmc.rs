fn main() {
    std::process::exit(whmc_core::cli::run(std::env::args_os()));
}
