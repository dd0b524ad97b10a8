fn main() {
    std::process::exit(entangling_ops::cli::run());
}
