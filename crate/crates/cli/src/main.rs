fn main() {
    std::process::exit(ddpd_cli::main_with_args(std::env::args_os()));
}
