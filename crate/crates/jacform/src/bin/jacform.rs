fn main() {
    std::process::exit(jacform::cli::run());
}
