//! Hamiltonian, angular integral, Hamilton's equations and their numerical
//! integration.
//!
//! The kinetic term is `p_r² + p_φ²/r²` without a factor `1/2`, so
//! `ṙ = 2p_r` and `φ̇ = 2p_φ/r²`. Every closed-form result elsewhere in the
//! crate uses the same normalisation.

mod adaptive;
mod symplectic;
mod tableau;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{
    check_boundedness, sector_of, Conserved, PhaseState, SystemParams, Trajectory, Verdict,
};

/// Below this `|cos kφ|` or `|sin kφ|` a non-zero barrier is singular.
const TRIG_FLOOR: f64 = 1e-300;

/// Angular potential `W(φ) = αk²/cos²kφ + βk²/sin²kφ` and `dW/dφ`.
pub fn angular_potential(phi: f64, params: &SystemParams) -> Result<(f64, f64)> {
    let k = params.k();
    let k2 = k * k;
    let (s, c) = (k * phi).sin_cos();
    let mut w = 0.0;
    let mut dw = 0.0;
    if params.alpha != 0.0 {
        if c.abs() < TRIG_FLOOR {
            return Err(Error::SectorWall { phi });
        }
        let c2 = c * c;
        w += params.alpha * k2 / c2;
        dw += 2.0 * params.alpha * k2 * k * s / (c2 * c);
    }
    if params.beta != 0.0 {
        if s.abs() < TRIG_FLOOR {
            return Err(Error::SectorWall { phi });
        }
        let s2 = s * s;
        w += params.beta * k2 / s2;
        dw -= 2.0 * params.beta * k2 * k * c / (s2 * s);
    }
    Ok((w, dw))
}

fn check_radius(state: &PhaseState) -> Result<()> {
    if state.r > 0.0 && state.r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "radius r = {} must be positive",
            state.r
        )))
    }
}

/// `H_k` at `state`.
pub fn hamiltonian(state: &PhaseState, params: &SystemParams) -> Result<f64> {
    check_radius(state)?;
    let (w, _) = angular_potential(state.phi, params)?;
    let r2 = state.r * state.r;
    let om2 = params.omega * params.omega;
    Ok(state.p_r * state.p_r + (state.p_phi * state.p_phi + w) / r2 + om2 * r2)
}

/// Angular integral `X_k = p_φ² + W(φ)`.
pub fn xk_value(state: &PhaseState, params: &SystemParams) -> Result<f64> {
    let (w, _) = angular_potential(state.phi, params)?;
    Ok(state.p_phi * state.p_phi + w)
}

/// Time derivatives `(ṙ, φ̇, ṗ_r, ṗ_φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub dr: f64,
    pub dphi: f64,
    pub dp_r: f64,
    pub dp_phi: f64,
}

/// Hamilton's equations for `H_k`.
pub fn eom(state: &PhaseState, params: &SystemParams) -> Result<Derivatives> {
    check_radius(state)?;
    let (w, dw) = angular_potential(state.phi, params)?;
    let r = state.r;
    let r2 = r * r;
    let r3 = r2 * r;
    let om2 = params.omega * params.omega;
    Ok(Derivatives {
        dr: 2.0 * state.p_r,
        dphi: 2.0 * state.p_phi / r2,
        dp_r: 2.0 * (state.p_phi * state.p_phi + w) / r3 - 2.0 * om2 * r,
        dp_phi: -dw / r2,
    })
}

pub(crate) fn rhs(params: &SystemParams, y: &[f64; 4]) -> Result<[f64; 4]> {
    let d = eom(&PhaseState::from_array(0.0, *y), params)?;
    Ok([d.dr, d.dphi, d.dp_r, d.dp_phi])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Embedded Dormand-Prince 8(5,3) pair with error control.
    AdaptiveRk,
    /// Fixed-step fourth-order Yoshida composition of Störmer-Verlet, run in
    /// cartesian coordinates where the Hamiltonian is separable.
    Symplectic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Record every accepted step.
    pub dense_output: bool,
    /// Additionally record samples on this uniform grid. Steps are shortened
    /// to land on it exactly, so no interpolation is involved.
    pub output_step: Option<f64>,
    /// Step of the symplectic method.
    pub fixed_step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::AdaptiveRk,
            rel_tol: 1e-13,
            abs_tol: 1e-13,
            max_step: 0.02,
            dense_output: true,
            output_step: None,
            fixed_step: 1e-3,
        }
    }
}

impl IntegratorConfig {
    pub fn symplectic(step: f64) -> Self {
        Self {
            method: Method::Symplectic,
            fixed_step: step,
            ..Self::default()
        }
    }

    /// Uniform output grid only.
    pub fn sampled(dt: f64) -> Self {
        Self {
            dense_output: false,
            output_step: Some(dt),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_step", self.max_step),
            ("fixed_step", self.fixed_step),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        if let Some(dt) = self.output_step {
            if !(dt > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "output_step = {dt} must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// Sector the whole trajectory must stay in, when both barriers are present.
pub(crate) fn confining_sector(state: &PhaseState, params: &SystemParams) -> Result<Option<i64>> {
    if params.alpha > 0.0 && params.beta > 0.0 {
        sector_of(state.phi, params.k)
            .map(Some)
            .map_err(|_| Error::SectorWall { phi: state.phi })
    } else {
        Ok(None)
    }
}

fn conserved_at(state: &PhaseState, params: &SystemParams) -> Result<Conserved> {
    Ok(Conserved {
        h: hamiltonian(state, params)?,
        x: xk_value(state, params)?,
    })
}

/// Integrates from `initial` to `t_end`, recording samples and the values of
/// `H` and `X_k` on each.
pub fn integrate(
    initial: &PhaseState,
    params: &SystemParams,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    config.validate()?;
    if !(t_end > initial.t) {
        return Err(Error::InvalidParams(format!(
            "t_end = {t_end} must exceed the initial time {}",
            initial.t
        )));
    }
    conserved_at(initial, params)?;
    let samples = match config.method {
        Method::AdaptiveRk => adaptive::run(initial, params, t_end, config, true)?,
        Method::Symplectic => symplectic::run(initial, params, t_end, config)?,
    };
    let conserved = samples
        .iter()
        .map(|s| conserved_at(s, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        params: *params,
        samples,
        conserved,
    })
}

/// Advances `state` to time `t` with the adaptive integrator and returns only
/// the final state. `t` may equal `state.t`.
pub fn propagate(
    state: &PhaseState,
    params: &SystemParams,
    t: f64,
    config: &IntegratorConfig,
) -> Result<PhaseState> {
    if t == state.t {
        return Ok(*state);
    }
    if t < state.t {
        return Err(Error::InvalidParams(format!(
            "cannot propagate backwards from {} to {t}",
            state.t
        )));
    }
    let cfg = IntegratorConfig {
        method: Method::AdaptiveRk,
        dense_output: false,
        output_step: None,
        ..*config
    };
    let samples = adaptive::run(state, params, t, &cfg, false)?;
    Ok(*samples.last().expect("final state is always recorded"))
}

/// Sign of a momentum component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply(self, v: f64) -> f64 {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }

    pub fn of(v: f64) -> Self {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Builds a phase-space point with `H = energy` and `X_k = a` at angle `phi0`
/// and radius `r0` (the midpoint `r² = E/(2ω²)` of the turning interval when
/// `None`). `signs` are the signs of `(p_r, p_φ)`.
pub fn state_from_constants(
    params: &SystemParams,
    energy: f64,
    a: f64,
    phi0: f64,
    r0: Option<f64>,
    signs: (Sign, Sign),
) -> Result<PhaseState> {
    let report = check_boundedness(params, energy, a);
    if report.verdict != Verdict::Bounded {
        return Err(Error::NotBounded(format!(
            "verdict {:?}, violated: {}",
            report.verdict,
            report
                .violations
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }
    let r0 = r0.unwrap_or_else(|| (energy / (2.0 * params.omega * params.omega)).sqrt());
    if !(r0 > 0.0) {
        return Err(Error::InvalidParams(format!("r0 = {r0} must be positive")));
    }
    let (w, _) = angular_potential(phi0, params)?;
    let ang = a - w;
    let r02 = r0 * r0;
    let rad = energy - a / r02 - params.omega * params.omega * r02;
    let clamp = |v: f64, scale: f64, what: &str| -> Result<f64> {
        if v >= 0.0 {
            Ok(v)
        } else if v > -1e-12 * scale {
            Ok(0.0)
        } else {
            Err(Error::InconsistentConstants(format!(
                "{what} radicand {v} is negative"
            )))
        }
    };
    let p_phi = clamp(ang, a.abs(), "angular")?.sqrt();
    let p_r = clamp(rad, energy.abs(), "radial")?.sqrt();
    Ok(PhaseState::new(
        0.0,
        r0,
        phi0,
        signs.0.apply(p_r),
        signs.1.apply(p_phi),
    ))
}
