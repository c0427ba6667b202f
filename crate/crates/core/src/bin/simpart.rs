fn main() {
    std::process::exit(simpart::cli::main())
}
