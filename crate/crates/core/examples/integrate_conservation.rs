//! Integrates one orbit per value of k and reports the drift of H and X.

use ttw_orbits::dynamics::{integrate, IntegratorConfig};
use ttw_orbits::presets::parameter_sets;

fn main() -> ttw_orbits::Result<()> {
    for p in parameter_sets() {
        let s0 = p.equation()?.phase_state(0.3, 0, 0.0)?;
        let t_end = 10.0 * p.params.radial_period();
        let traj = integrate(&s0, &p.params, t_end, &IntegratorConfig::default())?;
        let (dh, dx) = traj.max_relative_drift();
        println!(
            "k = {:>3}: {} steps, drift H {dh:.2e}, X {dx:.2e}",
            p.params.k,
            traj.samples.len()
        );
    }
    Ok(())
}
