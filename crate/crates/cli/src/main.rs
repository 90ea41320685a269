fn main() {
    std::process::exit(qchaos_cli::run(std::env::args_os()));
}
