fn main() {
    std::process::exit(stbc_fsd::cli::main_with_args());
}
