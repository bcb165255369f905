fn main() {
    std::process::exit(probabs::cli::main_with(std::env::args_os()));
}
