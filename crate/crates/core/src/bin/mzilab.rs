fn main() {
    std::process::exit(mzilab::cli::main_with_args(std::env::args_os()));
}
