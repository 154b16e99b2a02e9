//! Writes the data of every figure preset into a directory (default
//! `figure-data`).

fn main() {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "figure-data".into());
    let code = ttw_orbits::cli::run(["ttw-orbits", "figures", "--out", &dir]);
    std::process::exit(code);
}
