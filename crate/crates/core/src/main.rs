fn main() {
    std::process::exit(mfpp::cli::run(std::env::args_os()));
}
