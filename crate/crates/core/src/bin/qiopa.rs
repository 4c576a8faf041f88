fn main() {
    std::process::exit(qiopa::cli::run(std::env::args_os()));
}
