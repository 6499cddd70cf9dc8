fn main() {
    std::process::exit(rklearn::cli::main());
}
