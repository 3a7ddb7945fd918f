fn main() {
    std::process::exit(finsleroid::cli::run());
}
