fn main() {
    std::process::exit(ttw_orbits::cli::run(std::env::args_os()));
}
