fn main() {
    std::process::exit(favard::cli::main());
}
