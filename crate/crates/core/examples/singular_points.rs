//! Lists the candidate singular points of each preset orbit.

use ttw_orbits::analysis::{count_singular, singular_points};
use ttw_orbits::presets::parameter_sets;

fn main() -> ttw_orbits::Result<()> {
    for p in parameter_sets() {
        let eq = p.equation()?;
        let pts = singular_points(&eq);
        println!(
            "k = {}: {} singular radii",
            p.params.k,
            count_singular(&pts)
        );
        for s in pts.iter().filter(|s| s.on_trajectory) {
            println!(
                "    r = {:.9}, phi = {:.9}, R* = {:+.6}",
                s.r, s.phi, s.r_star
            );
        }
    }
    Ok(())
}
