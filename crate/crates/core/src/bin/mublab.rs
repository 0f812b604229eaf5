fn main() {
    std::process::exit(mublab::cli::run(std::env::args_os()));
}
