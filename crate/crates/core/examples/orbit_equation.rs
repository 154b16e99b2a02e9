//! Fits the orbit constant from an integrated state and checks the orbit
//! equation along the whole trajectory.

use ttw_orbits::closedform::OrbitEquation;
use ttw_orbits::dynamics::{integrate, IntegratorConfig};
use ttw_orbits::presets::orbit_preset;

fn main() -> ttw_orbits::Result<()> {
    let p = orbit_preset("fig14")?;
    let s0 = p.equation()?.phase_state(1.1, 0, 0.0)?;
    let traj = integrate(
        &s0,
        &p.params,
        4.0 * p.params.radial_period(),
        &IntegratorConfig::default(),
    )?;
    let fitted = OrbitEquation::from_state(traj.initial(), p.params)?;
    println!(
        "k = {}: E = {:.12}, A = {:.12}, C = {:.12} ({}), delta1 = {:.6}",
        p.params.k,
        fitted.constants.energy,
        fitted.constants.a,
        fitted.constants.c,
        fitted.branch,
        fitted.constants.delta1
    );
    let mut worst = 0.0f64;
    for s in &traj.samples {
        worst = worst.max(fitted.orbit_residual(s.r, s.phi)?.abs());
    }
    println!(
        "max |residual| over {} samples: {worst:.2e}",
        traj.samples.len()
    );
    let phi = traj.samples[10].phi;
    println!("radii at phi = {phi:.6}: {:?}", fitted.solve_r_at_phi(phi)?);
    Ok(())
}
