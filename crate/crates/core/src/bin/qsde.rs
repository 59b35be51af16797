fn main() {
    std::process::exit(qsde_cascade::cli::main_from_args());
}
