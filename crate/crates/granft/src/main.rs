fn main() {
    std::process::exit(granft::cli::run());
}
