//! Closed-form trajectories.
//!
//! The radial and angular motions are reduced to two cosines,
//! `R = cos Ψ` and `U = cos Χ`, whose phases both grow linearly in the
//! time-like variable `σ` with `dσ = dt/r²`. For `k = m/n` the combination
//! `mΨ − nΧ` is constant, which gives the algebraic orbit equation
//! `T_m(R) = T_n(U) cos C ± √(1 − T_n(U)²) sin C`.

pub mod chebyshev;
mod orbit;
mod timelaw;

pub use chebyshev::{
    chebyshev_t, chebyshev_t_binomial, chebyshev_t_derivative, critical_points, solve_chebyshev,
};
pub use orbit::{
    fit_orbit_constant, Branch, OrbitCurve, OrbitEquation, OrbitKind, OrbitPoint, TracePoint,
};
pub use timelaw::{fit_delta1, fit_delta1_free, r2_of_t, r2_of_t_free};

use crate::error::{Error, Result};
use crate::types::{angular_bounds, radial_bounds, SystemParams};

/// Relative slack on the turning intervals before a point counts as outside.
pub const INTERVAL_SLACK: f64 = 1e-9;

fn clamp_unit(v: f64) -> f64 {
    v.clamp(-1.0, 1.0)
}

/// Radial reduction `r ↦ R` for fixed `E`, `A`, `ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialReduction {
    pub energy: f64,
    pub a: f64,
    /// `√(E² − 4ω²A)`.
    pub amplitude: f64,
    pub r2_min: f64,
    pub r2_max: f64,
}

impl RadialReduction {
    pub fn new(energy: f64, a: f64, omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !(a > 0.0) || !(energy > 0.0) {
            return Err(Error::NotBounded(format!(
                "radial reduction needs E, A, omega > 0 (E = {energy}, A = {a}, omega = {omega})"
            )));
        }
        let (r2_min, r2_max) = radial_bounds(energy, a, omega)?;
        let disc = energy * energy - 4.0 * omega * omega * a;
        let amplitude = disc.max(0.0).sqrt();
        if amplitude == 0.0 {
            return Err(Error::NotBounded("circular orbit: R is undefined".into()));
        }
        Ok(Self {
            energy,
            a,
            amplitude,
            r2_min,
            r2_max,
        })
    }

    pub fn reduce(&self, r: f64) -> Result<f64> {
        let r2 = r * r;
        let slack = INTERVAL_SLACK * self.r2_max;
        if !(r2 >= self.r2_min - slack && r2 <= self.r2_max + slack) {
            return Err(Error::OutOfAnnulus {
                r2,
                r2_min: self.r2_min,
                r2_max: self.r2_max,
            });
        }
        Ok(clamp_unit(
            (self.energy * r2 - 2.0 * self.a) / (r2 * self.amplitude),
        ))
    }

    pub fn radius(&self, reduced: f64) -> f64 {
        let rv = clamp_unit(reduced);
        (2.0 * self.a / (self.energy - rv * self.amplitude)).sqrt()
    }
}

/// Angular reduction `φ ↦ U` for fixed `A` and barrier constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularReduction {
    pub params: SystemParams,
    pub a: f64,
    /// `√((A − (α−β)k²)² − 4Aβk²)`.
    pub amplitude: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl AngularReduction {
    pub fn new(params: &SystemParams, a: f64) -> Result<Self> {
        let (z_min, z_max) = angular_bounds(a, params.alpha, params.beta, params.k)?;
        let amplitude = params.angular_discriminant(a).max(0.0).sqrt();
        if amplitude == 0.0 {
            return Err(Error::NotBounded(
                "angular motion is frozen: U is undefined".into(),
            ));
        }
        Ok(Self {
            params: *params,
            a,
            amplitude,
            z_min,
            z_max,
        })
    }

    fn offset(&self) -> f64 {
        self.a - (self.params.alpha - self.params.beta) * self.params.k2()
    }

    pub fn reduce_z(&self, z: f64) -> Result<f64> {
        let slack = INTERVAL_SLACK;
        if !(z >= self.z_min - slack && z <= self.z_max + slack) {
            return Err(Error::OutOfAngularRange {
                z,
                z_min: self.z_min,
                z_max: self.z_max,
            });
        }
        Ok(clamp_unit(
            (-2.0 * self.a * z + self.offset()) / self.amplitude,
        ))
    }

    pub fn reduce(&self, phi: f64) -> Result<f64> {
        let s = (self.params.k() * phi).sin();
        self.reduce_z(s * s)
    }

    /// `z = sin²kφ` for a reduced angle value.
    pub fn z_of(&self, reduced: f64) -> f64 {
        let z = (self.offset() - clamp_unit(reduced) * self.amplitude) / (2.0 * self.a);
        z.clamp(self.z_min, self.z_max)
    }

    /// Angle with `sin²kφ = z` inside sector `sector`. Even sectors start
    /// on a `sin kφ = 0` wall, odd ones on a `cos kφ = 0` wall.
    pub fn angle_in_sector(&self, z: f64, sector: i64) -> f64 {
        let base = z.clamp(0.0, 1.0).sqrt().asin();
        let quarter = std::f64::consts::FRAC_PI_2;
        let kphi = if sector.rem_euclid(2) == 0 {
            sector as f64 * quarter + base
        } else {
            (sector + 1) as f64 * quarter - base
        };
        kphi / self.params.k()
    }
}

/// `R = (E r² − 2A)/(r² √(E² − 4ω²A))`.
pub fn reduced_radius(r: f64, energy: f64, a: f64, omega: f64) -> Result<f64> {
    RadialReduction::new(energy, a, omega)?.reduce(r)
}

/// `r = √(2A/(E − R √(E² − 4ω²A)))`, the inverse of [`reduced_radius`].
pub fn radius_of_reduced(reduced: f64, energy: f64, a: f64, omega: f64) -> Result<f64> {
    Ok(RadialReduction::new(energy, a, omega)?.radius(reduced))
}

/// `U = (−2A sin²kφ + A − (α−β)k²)/√((A − (α−β)k²)² − 4Aβk²)`.
pub fn reduced_angle(phi: f64, params: &SystemParams, a: f64) -> Result<f64> {
    AngularReduction::new(params, a)?.reduce(phi)
}
