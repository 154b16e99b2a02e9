//! Without the oscillator the particle escapes: r² grows quadratically.

use ttw_orbits::closedform::{fit_delta1_free, r2_of_t_free};
use ttw_orbits::dynamics::{hamiltonian, integrate, xk_value, IntegratorConfig};
use ttw_orbits::types::{check_boundedness, Rational};
use ttw_orbits::{PhaseState, SystemParams};

fn main() -> ttw_orbits::Result<()> {
    let params = SystemParams::new(0.0, 3.0, 2.0, Rational::integer(1)?)?;
    let s0 = PhaseState::new(0.0, 1.0, 0.7, -1.5, 0.8);
    let (e, a) = (hamiltonian(&s0, &params)?, xk_value(&s0, &params)?);
    println!(
        "E = {e:.6}, A = {a:.6}, verdict {:?}",
        check_boundedness(&params, e, a).verdict
    );
    let delta = fit_delta1_free(&s0, e, a)?;
    let traj = integrate(&s0, &params, 4.0, &IntegratorConfig::sampled(0.5))?;
    for s in &traj.samples {
        println!(
            "t = {:4.2}: r^2 = {:12.6}, law {:12.6}",
            s.t,
            s.r * s.r,
            r2_of_t_free(e, a, delta, s.t)
        );
    }
    Ok(())
}
