fn main() {
    std::process::exit(sparsetw::cli::run(std::env::args()));
}
