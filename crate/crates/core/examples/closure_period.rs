//! Measures the full-state period and the closure gap for every k.

use ttw_orbits::analysis::{measure_closure_with, ClosureOptions};
use ttw_orbits::dynamics::{integrate, IntegratorConfig};
use ttw_orbits::presets::parameter_sets;

fn main() -> ttw_orbits::Result<()> {
    for p in parameter_sets() {
        let s0 = p.equation()?.phase_state(0.3, 0, 0.0)?;
        let t = p.params.radial_period();
        let traj = integrate(&s0, &p.params, 5.0 * t, &IntegratorConfig::default())?;
        let rep = measure_closure_with(&traj, &ClosureOptions::default())?;
        let n = p.params.k.denom() as f64;
        let at_nt = measure_closure_with(
            &traj,
            &ClosureOptions {
                offset: Some(n * t),
                ..ClosureOptions::default()
            },
        )?;
        println!(
            "k = {:>3}: period {:.12} (= {:.0} T), gap after T {:.2e}, after nT {:.2e}, angular period {:.9}",
            p.params.k, rep.period_estimate, rep.period_estimate / t, rep.closure_gap, at_nt.closure_gap, rep.k_period_angle
        );
    }
    Ok(())
}
