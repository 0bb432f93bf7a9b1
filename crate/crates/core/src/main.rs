fn main() {
    std::process::exit(beamspace::cli::main_with(std::env::args_os()));
}
