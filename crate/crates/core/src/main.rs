fn main() {
    std::process::exit(moduli::cli::run());
}
