//! The k = 1 orbit from its cartesian oscillations and from the polar
//! orbit equation, compared point-set to point-set.

use ttw_orbits::analysis::hausdorff_distance;
use ttw_orbits::closedform::{Branch, OrbitEquation};
use ttw_orbits::k1::{
    cartesian_curve, classify_region, constants_cartesian_to_polar, CartesianConstants,
};
use ttw_orbits::types::Rational;
use ttw_orbits::SystemParams;

fn main() -> ttw_orbits::Result<()> {
    let params = SystemParams::new(2.0, 3.0, 2.0, Rational::integer(1)?)?;
    let cc = CartesianConstants::from_phase_difference(9.0, 11.0, 1.2, &params)?;
    let map = constants_cartesian_to_polar(&cc, &params)?;
    let c = map.c().expect("real orbit constant");
    println!(
        "E1 = {}, E2 = {}, S = {} -> A = {:.12}, cos C = {:.12}, region {}",
        cc.e1, cc.e2, cc.s, map.a, map.cos_c, map.region
    );
    let curve = cartesian_curve(&cc, &params, 4000)?;
    let eq = OrbitEquation::new(params, cc.energy(), map.a, c, Branch::Plus)?;
    let polar: Vec<(f64, f64)> = eq.trace(8000, 0).iter().map(|p| p.xy()).collect();
    println!(
        "Hausdorff distance cartesian/polar: {:.2e}",
        hausdorff_distance(&curve, &polar, true)
    );
    for (e1, a) in [(10.0, 17.5), (10.0, 12.0), (8.0, 11.0), (13.0, 23.0)] {
        println!(
            "region at E1 = {e1}, A = {a}: {}",
            classify_region(e1, a, &params, 20.0)
        );
    }
    Ok(())
}
