fn main() {
    std::process::exit(gatsbi::cli::run_from_env());
}
