fn main() {
    std::process::exit(wiener_wintner::harness::main_with_args(std::env::args_os()));
}
