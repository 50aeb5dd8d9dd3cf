fn main() {
    std::process::exit(accel_qed::cli::run(std::env::args_os()));
}
