fn main() {
    std::process::exit(marcumq::cli::run());
}
