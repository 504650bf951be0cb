fn main() {
    std::process::exit(mderobust::cli::run(std::env::args_os()));
}
