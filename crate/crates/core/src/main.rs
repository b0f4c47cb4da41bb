fn main() {
    std::process::exit(heckedec::cli::run());
}
