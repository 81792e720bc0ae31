fn main() {
    let code = fss_compensation::cli::run(std::env::args_os());
    std::process::exit(code);
}
