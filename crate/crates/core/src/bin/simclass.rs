fn main() {
    std::process::exit(simclass::cli::main());
}
