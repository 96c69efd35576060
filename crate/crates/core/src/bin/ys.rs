fn main() {
    std::process::exit(ys_core::cli::run(std::env::args_os()));
}
