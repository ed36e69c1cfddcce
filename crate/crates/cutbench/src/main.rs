fn main() {
    std::process::exit(cutbench::bench::cli::run(std::env::args_os()));
}
