fn main() {
    std::process::exit(darboux_lab::cli::run(std::env::args_os()));
}
