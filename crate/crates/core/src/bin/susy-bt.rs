fn main() {
    std::process::exit(susy_backlund::cli::run(std::env::args_os()));
}
