use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::chebyshev::{solve_chebyshev, t_unchecked};
use super::{AngularReduction, RadialReduction};
use crate::dynamics::{angular_potential, hamiltonian, xk_value};
use crate::error::{Error, Result};
use crate::types::{
    check_boundedness, MotionConstants, PhaseState, Rational, SystemParams, Verdict,
};

use super::timelaw::fit_delta1;

/// Slack allowed on `C ∈ [0, π]`.
const C_SLACK: f64 = 1e-12;

/// Sign in front of `√(1 − T_n(U)²) sin C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitKind {
    IntegerK(u32),
    RationalK(u32, u32),
}

impl OrbitKind {
    pub fn of(k: Rational) -> Self {
        if k.is_integer() {
            OrbitKind::IntegerK(k.numer())
        } else {
            OrbitKind::RationalK(k.numer(), k.denom())
        }
    }

    /// `(m, n)` with `k = m/n`.
    pub fn degrees(self) -> (u32, u32) {
        match self {
            OrbitKind::IntegerK(m) => (m, 1),
            OrbitKind::RationalK(m, n) => (m, n),
        }
    }
}

/// One sampled point of [`OrbitEquation::sample_orbit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub phi: f64,
    pub r: f64,
    /// Position among the real roots at this angle, ascending in `r`.
    pub root_index: usize,
    pub branch: Branch,
}

impl OrbitPoint {
    pub fn xy(&self) -> (f64, f64) {
        (self.r * self.phi.cos(), self.r * self.phi.sin())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitCurve {
    pub points: Vec<OrbitPoint>,
    /// Largest `|r(φ) − r(φ + τ)|` at the first and last interior samples.
    pub closure_defect: f64,
}

/// Point of the parametric trace, ordered along the orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub psi: f64,
    pub r: f64,
    pub phi: f64,
}

impl TracePoint {
    pub fn xy(&self) -> (f64, f64) {
        (self.r * self.phi.cos(), self.r * self.phi.sin())
    }
}

/// Algebraic orbit `T_m(R) = T_n(U) cos C ± √(1 − T_n(U)²) sin C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitEquation {
    pub params: SystemParams,
    pub constants: MotionConstants,
    pub branch: Branch,
    pub kind: OrbitKind,
    radial: RadialReduction,
    angular: AngularReduction,
}

impl OrbitEquation {
    pub fn new(params: SystemParams, energy: f64, a: f64, c: f64, branch: Branch) -> Result<Self> {
        let report = check_boundedness(&params, energy, a);
        if report.verdict != Verdict::Bounded {
            return Err(Error::NotBounded(format!(
                "verdict {:?} for E = {energy}, A = {a}",
                report.verdict
            )));
        }
        if !(-C_SLACK..=PI + C_SLACK).contains(&c) {
            return Err(Error::InvalidParams(format!("C = {c} must lie in [0, pi]")));
        }
        Ok(Self {
            params,
            constants: MotionConstants::new(energy, a, c.clamp(0.0, PI), 0.0),
            branch,
            kind: OrbitKind::of(params.k),
            radial: RadialReduction::new(energy, a, params.omega)?,
            angular: AngularReduction::new(&params, a)?,
        })
    }

    /// Orbit through `state`: `E` and `A` are measured, then `C`, the
    /// branch and `δ₁` are fitted.
    pub fn from_state(state: &PhaseState, params: SystemParams) -> Result<Self> {
        let energy = hamiltonian(state, &params)?;
        let a = xk_value(state, &params)?;
        let (c, branch) = fit_orbit_constant(state, &params, energy, a)?;
        let mut eq = Self::new(params, energy, a, c, branch)?;
        eq.constants.delta1 = fit_delta1(state, energy, a, params.omega)?;
        Ok(eq)
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    pub fn radial(&self) -> &RadialReduction {
        &self.radial
    }

    pub fn angular(&self) -> &AngularReduction {
        &self.angular
    }

    /// Right-hand side for a reduced angle `u`.
    pub fn rhs(&self, u: f64, branch: Branch) -> f64 {
        let (_, n) = self.kind.degrees();
        let tn = t_unchecked(n, u.clamp(-1.0, 1.0));
        let c = self.constants.c;
        tn * c.cos() + branch.sign() * (1.0 - tn * tn).max(0.0).sqrt() * c.sin()
    }

    /// `T_m(R) − rhs` at `(r, φ)` on `branch`.
    pub fn residual(&self, r: f64, phi: f64, branch: Branch) -> Result<f64> {
        let (m, _) = self.kind.degrees();
        let rv = self.radial.reduce(r)?;
        let u = self.angular.reduce(phi)?;
        Ok(t_unchecked(m, rv) - self.rhs(u, branch))
    }

    /// Residual on whichever branch is closer to zero.
    pub fn orbit_residual(&self, r: f64, phi: f64) -> Result<f64> {
        let plus = self.residual(r, phi, Branch::Plus)?;
        let minus = self.residual(r, phi, Branch::Minus)?;
        Ok(if plus.abs() <= minus.abs() {
            plus
        } else {
            minus
        })
    }

    /// Real roots `R` at reduced angle `u` on `branch`, ascending.
    pub fn reduced_roots(&self, u: f64, branch: Branch) -> Result<Vec<f64>> {
        let (m, _) = self.kind.degrees();
        solve_chebyshev(m, self.rhs(u, branch).clamp(-1.0, 1.0))
    }

    /// Radii of the orbit at angle `phi` on the equation's branch, ascending.
    pub fn solve_r_at_phi(&self, phi: f64) -> Result<Vec<f64>> {
        let u = self.angular.reduce(phi)?;
        let roots = self.reduced_roots(u, self.branch)?;
        if roots.is_empty() {
            return Err(Error::NoRealRoot { phi });
        }
        Ok(roots.into_iter().map(|rv| self.radial.radius(rv)).collect())
    }

    /// Samples the orbit inside `sector` on both branches. The angle grid is
    /// uniform in the angular phase, so both angular turning points are hit.
    /// `root_index` keeps only that root.
    pub fn sample_orbit(
        &self,
        root_index: Option<usize>,
        n_samples: usize,
        sector: i64,
    ) -> Result<OrbitCurve> {
        if n_samples < 2 {
            return Err(Error::InvalidParams("need at least two samples".into()));
        }
        let mut points = Vec::new();
        for j in 0..n_samples {
            let u = (PI * j as f64 / (n_samples - 1) as f64).cos();
            let phi = self.angular.angle_in_sector(self.angular.z_of(u), sector);
            for branch in Branch::BOTH {
                for (idx, rv) in self.reduced_roots(u, branch)?.into_iter().enumerate() {
                    if root_index.is_none_or(|want| want == idx) {
                        points.push(OrbitPoint {
                            phi,
                            r: self.radial.radius(rv),
                            root_index: idx,
                            branch,
                        });
                    }
                }
            }
        }
        if points.is_empty() {
            return Err(Error::EmptyOrbit);
        }
        let tau = self.params.angular_period();
        let mut closure_defect: f64 = 0.0;
        let inner = |j: usize| {
            let u = (PI * j as f64 / (n_samples - 1) as f64).cos();
            self.angular.angle_in_sector(self.angular.z_of(u), sector)
        };
        let ends = if n_samples > 2 {
            [inner(1), inner(n_samples - 2)]
        } else {
            [inner(0), inner(1)]
        };
        for phi in ends {
            let here = self.solve_r_at_phi(phi)?;
            let there = self.solve_r_at_phi(phi + tau)?;
            if here.len() != there.len() {
                closure_defect = f64::INFINITY;
                continue;
            }
            for (a, b) in here.iter().zip(&there) {
                closure_defect = closure_defect.max((a - b).abs());
            }
        }
        Ok(OrbitCurve {
            points,
            closure_defect,
        })
    }

    /// Traces the full closed orbit in `sector` by running the radial phase
    /// `ψ` over `[0, 2πn)` and setting the angular phase to `(mψ − C)/n`.
    pub fn trace(&self, n_samples: usize, sector: i64) -> Vec<TracePoint> {
        let (_, n) = self.kind.degrees();
        let span = 2.0 * PI * n as f64;
        (0..n_samples)
            .map(|j| {
                let psi = span * j as f64 / n_samples as f64;
                let (r, phi, _) = self.position_at(psi, sector);
                TracePoint { psi, r, phi }
            })
            .collect()
    }

    fn position_at(&self, psi: f64, sector: i64) -> (f64, f64, f64) {
        let (m, n) = self.kind.degrees();
        let chi = (m as f64 * psi - self.constants.c) / n as f64;
        let r = self.radial.radius(psi.cos());
        let phi = self
            .angular
            .angle_in_sector(self.angular.z_of(chi.cos()), sector);
        (r, phi, chi)
    }

    /// Full phase-space state at radial phase `psi`, with momenta signed so
    /// that both phases grow forward in time.
    pub fn phase_state(&self, psi: f64, sector: i64, t: f64) -> Result<PhaseState> {
        let (r, phi, chi) = self.position_at(psi, sector);
        let e = self.constants.energy;
        let a = self.constants.a;
        let om2 = self.params.omega * self.params.omega;
        let pr2 = (e - a / (r * r) - om2 * r * r).max(0.0);
        let p_r = -psi.sin().signum() * pr2.sqrt();
        let (w, _) = angular_potential(phi, &self.params)?;
        let orient = (2.0 * self.params.k() * phi).sin().signum();
        let p_phi = chi.sin().signum() * orient * (a - w).max(0.0).sqrt();
        Ok(PhaseState::new(t, r, phi, p_r, p_phi))
    }
}

/// Fits `C ∈ [0, π]` and the branch through `state` from the phases
/// `Ψ₀ = ±arccos R`, `Χ₀ = ±arccos U`, with signs read off the momenta.
pub fn fit_orbit_constant(
    state: &PhaseState,
    params: &SystemParams,
    energy: f64,
    a: f64,
) -> Result<(f64, Branch)> {
    let radial = RadialReduction::new(energy, a, params.omega)?;
    let angular = AngularReduction::new(params, a)?;
    let rv = radial.reduce(state.r)?;
    let u = angular.reduce(state.phi)?;
    let psi0 = if state.p_r > 0.0 {
        -rv.acos()
    } else {
        rv.acos()
    };
    let orient = (2.0 * params.k() * state.phi).sin() * state.p_phi;
    let chi0 = if orient < 0.0 { -u.acos() } else { u.acos() };
    let (m, n) = OrbitKind::of(params.k).degrees();
    let c = (m as f64 * psi0 - n as f64 * chi0)
        .cos()
        .clamp(-1.0, 1.0)
        .acos();

    let tm = t_unchecked(m, rv);
    let tn = t_unchecked(n, u);
    let root = (1.0 - tn * tn).max(0.0).sqrt() * c.sin();
    let base = tn * c.cos();
    let branch = if (tm - base - root).abs() <= (tm - base + root).abs() {
        Branch::Plus
    } else {
        Branch::Minus
    };
    Ok((c, branch))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(k: Rational, e: f64, a: f64, alpha: f64, beta: f64, c: f64) -> OrbitEquation {
        let p = SystemParams::new(2.0, alpha, beta, k).unwrap();
        OrbitEquation::new(p, e, a, c, Branch::Plus).unwrap()
    }

    fn presets() -> Vec<OrbitEquation> {
        let r = |m, n| Rational::new(m, n).unwrap();
        vec![
            eq(r(1, 1), 20.0, 12.0, 3.0, 2.0, PI / 2.0),
            eq(r(2, 1), 50.0, 60.0, 3.0, 2.0, PI / 2.0),
            eq(r(3, 1), 50.0, 100.0, 3.0, 2.0, 1.1),
            eq(r(4, 1), 16.0, 15.0, 0.25, 0.125, 0.4),
            eq(r(1, 2), 20.0, 24.0, 3.0, 2.0, PI / 2.0),
            eq(r(1, 3), 20.0, 24.0, 3.0, 2.0, 2.5),
            eq(r(3, 2), 15.0, 10.0, 0.25, 0.125, PI / 2.0),
        ]
    }

    #[test]
    fn unbounded_or_bad_c_is_rejected() {
        let p = SystemParams::new(2.0, 3.0, 2.0, Rational::integer(1).unwrap()).unwrap();
        assert!(matches!(
            OrbitEquation::new(p, 20.0, 200.0, 1.0, Branch::Plus),
            Err(Error::NotBounded(_))
        ));
        assert!(OrbitEquation::new(p, 20.0, 12.0, 3.5, Branch::Plus).is_err());
    }

    #[test]
    fn k1_root_is_the_explicit_expression() {
        let e = eq(Rational::integer(1).unwrap(), 20.0, 12.0, 3.0, 2.0, 0.7);
        let red = e.angular();
        for i in 1..20 {
            let z = red.z_min + (red.z_max - red.z_min) * i as f64 / 20.0;
            let phi = red.angle_in_sector(z, 0);
            let u = red.reduce(phi).unwrap();
            let want = u * 0.7f64.cos() + (1.0 - u * u).sqrt() * 0.7f64.sin();
            let radii = e.solve_r_at_phi(phi).unwrap();
            assert_eq!(radii.len(), 1);
            assert!((e.radial().reduce(radii[0]).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn k2_has_two_roots_ordered_by_radius() {
        let e = eq(
            Rational::integer(2).unwrap(),
            50.0,
            60.0,
            3.0,
            2.0,
            PI / 2.0,
        );
        let red = e.angular();
        let phi = red.angle_in_sector(0.5 * (red.z_min + red.z_max), 0);
        let radii = e.solve_r_at_phi(phi).unwrap();
        assert_eq!(radii.len(), 2);
        assert!(radii[0] < radii[1]);
        for r in radii {
            assert!(e.residual(r, phi, Branch::Plus).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn traced_points_satisfy_the_equation() {
        for e in presets() {
            for p in e.trace(400, 0) {
                let res = e.orbit_residual(p.r, p.phi).unwrap();
                assert!(res.abs() < 1e-7, "{:?}: {res}", e.kind);
            }
        }
    }

    #[test]
    fn phase_states_carry_the_constants_and_refit() {
        for e in presets() {
            for j in 0..13 {
                let psi = 0.1 + j as f64 * 0.47;
                let s = e.phase_state(psi, 0, 0.0).unwrap();
                let h = hamiltonian(&s, &e.params).unwrap();
                let x = xk_value(&s, &e.params).unwrap();
                assert!((h - e.constants.energy).abs() < 1e-9 * h);
                assert!((x - e.constants.a).abs() < 1e-9 * x);
                let (c, _) = fit_orbit_constant(&s, &e.params, h, x).unwrap();
                assert!((c - e.constants.c).abs() < 1e-7, "{:?}: {c}", e.kind);
            }
        }
    }

    #[test]
    fn sampled_orbit_closes_over_the_angular_period() {
        for e in presets() {
            let curve = e.sample_orbit(None, 101, 0).unwrap();
            assert!(curve.closure_defect < 1e-10);
            for p in &curve.points {
                assert!(e.residual(p.r, p.phi, p.branch).unwrap().abs() < 1e-7);
            }
        }
    }

    #[test]
    fn root_index_filters_points() {
        let e = eq(
            Rational::integer(2).unwrap(),
            50.0,
            60.0,
            3.0,
            2.0,
            PI / 2.0,
        );
        let all = e.sample_orbit(None, 21, 0).unwrap();
        let first = e.sample_orbit(Some(0), 21, 0).unwrap();
        assert!(first.points.iter().all(|p| p.root_index == 0));
        let second = e.sample_orbit(Some(1), 21, 0).unwrap();
        assert_eq!(all.points.len(), first.points.len() + second.points.len());
        assert!(matches!(
            e.sample_orbit(Some(5), 21, 0),
            Err(Error::EmptyOrbit)
        ));
    }

    #[test]
    fn reflected_constant_gives_the_same_points() {
        let e = eq(Rational::new(3, 2).unwrap(), 15.0, 10.0, 0.25, 0.125, 1.0);
        let u = 0.3;
        let tn = t_unchecked(2, u);
        let reflected = 2.0 * PI - 1.0;
        let other = tn * reflected.cos() - (1.0 - tn * tn).sqrt() * reflected.sin();
        assert!((e.rhs(u, Branch::Plus) - other).abs() < 1e-14);
    }

    #[test]
    fn delta1_is_fitted_from_the_state() {
        let e = eq(Rational::integer(1).unwrap(), 20.0, 12.0, 3.0, 2.0, 1.0);
        let s = e.phase_state(0.8, 0, 0.25).unwrap();
        let fitted = OrbitEquation::from_state(&s, e.params).unwrap();
        let c = fitted.constants;
        let r2 = super::super::r2_of_t(c.energy, c.a, 2.0, c.delta1, 0.25);
        assert!((r2 - s.r * s.r).abs() < 1e-10);
    }
}
