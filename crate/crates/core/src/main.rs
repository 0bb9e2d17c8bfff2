fn main() {
    std::process::exit(jacobi_nonlocal::cli::main_with_args(std::env::args_os()));
}
