fn main() {
    std::process::exit(wavespec::cli::run());
}
