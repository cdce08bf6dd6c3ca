fn main() {
    std::process::exit(plumbcalc::cli::main_with_args(std::env::args_os()));
}
