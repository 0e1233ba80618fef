fn main() {
    std::process::exit(coclass::cli::run());
}
