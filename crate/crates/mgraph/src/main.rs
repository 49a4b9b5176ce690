fn main() {
    std::process::exit(mgraph::cli::run());
}
