fn main() {
    std::process::exit(imtheta::cli::run(std::env::args()));
}
