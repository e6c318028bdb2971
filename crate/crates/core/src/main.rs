fn main() {
    std::process::exit(coxstab::cli::run(std::env::args_os()));
}
