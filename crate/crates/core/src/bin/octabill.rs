fn main() {
    std::process::exit(octagon_billiard::cli::main_with(std::env::args_os()));
}
