fn main() {
    std::process::exit(skewrank::cli::run());
}
