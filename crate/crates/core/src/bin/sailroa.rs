fn main() {
    std::process::exit(sailroa::cli::main());
}
