//! Turning intervals and the boundedness verdict for a few constant pairs.

use ttw_orbits::types::{check_boundedness, Rational};
use ttw_orbits::SystemParams;

fn main() -> ttw_orbits::Result<()> {
    let params = SystemParams::new(2.0, 3.0, 2.0, Rational::integer(1)?)?;
    for (energy, a) in [(20.0, 12.0), (20.0, 25.0), (20.0, 30.0), (20.0, 5.0)] {
        let rep = check_boundedness(&params, energy, a);
        println!(
            "E = {energy:5.1}, A = {a:5.1}: {:?}, r^2 in [{:.5}, {:.5}], z in [{:.5}, {:.5}]",
            rep.verdict, rep.r2_min, rep.r2_max, rep.z_min, rep.z_max
        );
        for c in &rep.violations {
            println!("    violated: {c}");
        }
    }
    Ok(())
}
