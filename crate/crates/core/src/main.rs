fn main() {
    std::process::exit(catalytic_otto::cli::run());
}
