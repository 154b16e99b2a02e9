//! Fixed-step fourth-order symplectic integration.
//!
//! In cartesian coordinates `H = p_x² + p_y² + V(x, y)` is separable, so the
//! Störmer-Verlet map is explicit. Three Verlet substeps with Yoshida weights
//! give a fourth-order symplectic scheme.

use super::{angular_potential, confining_sector, IntegratorConfig};
use crate::error::{Error, Result};
use crate::types::{angle_difference, sector_of, PhaseState, SystemParams};

struct Cartesian {
    q: [f64; 2],
    p: [f64; 2],
    /// Continuous polar angle, needed when a sector extends past `±π`.
    phi: f64,
}

impl Cartesian {
    fn from_polar(s: &PhaseState) -> Self {
        let [x, y, px, py] = s.to_cartesian();
        Self {
            q: [x, y],
            p: [px, py],
            phi: s.phi,
        }
    }

    fn to_polar(&self, t: f64) -> PhaseState {
        let mut s = PhaseState::from_cartesian(t, [self.q[0], self.q[1], self.p[0], self.p[1]]);
        s.phi = self.phi;
        s
    }

    fn update_angle(&mut self) {
        let raw = self.q[1].atan2(self.q[0]);
        self.phi += angle_difference(raw, self.phi);
    }

    fn force(&self, params: &SystemParams) -> Result<[f64; 2]> {
        let r = self.q[0].hypot(self.q[1]);
        let (w, dw) = angular_potential(self.phi, params)?;
        let om2 = params.omega * params.omega;
        let v_r = 2.0 * om2 * r - 2.0 * w / (r * r * r);
        let v_phi = dw / (r * r);
        let (s, c) = self.phi.sin_cos();
        Ok([-(v_r * c - v_phi * s / r), -(v_r * s + v_phi * c / r)])
    }

    fn verlet(&mut self, params: &SystemParams, h: f64) -> Result<()> {
        let f = self.force(params)?;
        for (p, f) in self.p.iter_mut().zip(f) {
            *p += 0.5 * h * f;
        }
        for i in 0..2 {
            self.q[i] += 2.0 * h * self.p[i];
        }
        self.update_angle();
        let f = self.force(params)?;
        for (p, f) in self.p.iter_mut().zip(f) {
            *p += 0.5 * h * f;
        }
        Ok(())
    }
}

pub(super) fn run(
    initial: &PhaseState,
    params: &SystemParams,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<Vec<PhaseState>> {
    let sector = confining_sector(initial, params)?;
    let span = t_end - initial.t;
    let steps = (span / config.fixed_step).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let every = match config.output_step {
        Some(dt) => ((dt / h).round() as usize).max(1),
        None => usize::MAX,
    };

    let cbrt2 = 2f64.cbrt();
    let w1 = 1.0 / (2.0 - cbrt2);
    let w0 = -cbrt2 / (2.0 - cbrt2);

    let mut state = Cartesian::from_polar(initial);
    let mut samples = vec![*initial];
    for i in 1..=steps {
        for w in [w1, w0, w1] {
            state.verlet(params, w * h)?;
        }
        let t = if i == steps {
            t_end
        } else {
            initial.t + i as f64 * h
        };
        if let Some(s) = sector {
            match sector_of(state.phi, params.k) {
                Ok(n) if n == s => {}
                _ => return Err(Error::SectorWall { phi: state.phi }),
            }
        }
        if config.dense_output || i % every == 0 || i == steps {
            samples.push(state.to_polar(t));
        }
    }
    Ok(samples)
}
