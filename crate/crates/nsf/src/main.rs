fn main() {
    std::process::exit(nsf::cli::main());
}
