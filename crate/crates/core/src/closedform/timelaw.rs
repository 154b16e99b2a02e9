//! Radial motion as an explicit function of time.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::types::PhaseState;

/// `r²(t) = (E + √(E² − 4ω²A) sin 4ω(t+δ₁))/(2ω²)`.
pub fn r2_of_t(energy: f64, a: f64, omega: f64, delta1: f64, t: f64) -> f64 {
    let om2 = omega * omega;
    let amp = (energy * energy - 4.0 * om2 * a).max(0.0).sqrt();
    (energy + amp * (4.0 * omega * (t + delta1)).sin()) / (2.0 * om2)
}

/// Free motion (`ω = 0`): `r²(t) = (A + 4E²(t+δ₁)²)/E`.
pub fn r2_of_t_free(energy: f64, a: f64, delta1: f64, t: f64) -> f64 {
    let s = t + delta1;
    (a + 4.0 * energy * energy * s * s) / energy
}

/// Phase `δ₁` of [`r2_of_t`] through `state`. The sign of `p_r` picks the
/// rising or falling half of the sine.
pub fn fit_delta1(state: &PhaseState, energy: f64, a: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParams("omega must be positive".into()));
    }
    let om2 = omega * omega;
    let amp = (energy * energy - 4.0 * om2 * a).max(0.0).sqrt();
    if amp == 0.0 {
        return Ok(-state.t);
    }
    let s = ((2.0 * om2 * state.r * state.r - energy) / amp).clamp(-1.0, 1.0);
    let theta = if state.p_r >= 0.0 {
        s.asin()
    } else {
        PI - s.asin()
    };
    Ok(theta / (4.0 * omega) - state.t)
}

/// Phase `δ₁` of [`r2_of_t_free`] through `state`.
pub fn fit_delta1_free(state: &PhaseState, energy: f64, a: f64) -> Result<f64> {
    if !(energy > 0.0) {
        return Err(Error::InvalidParams("free motion needs E > 0".into()));
    }
    let offset = ((energy * state.r * state.r - a).max(0.0) / (4.0 * energy * energy)).sqrt();
    let signed = if state.p_r < 0.0 { -offset } else { offset };
    Ok(signed - state.t)
}
