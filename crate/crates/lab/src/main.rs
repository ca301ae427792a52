fn main() {
    std::process::exit(logchol_lab::cli::main());
}
