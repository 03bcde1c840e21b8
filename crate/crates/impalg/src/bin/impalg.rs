fn main() {
    std::process::exit(impalg::cli::main_entry());
}
