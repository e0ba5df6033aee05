fn main() {
    std::process::exit(segbias_cli::run(std::env::args_os()));
}
