//! The `k = 1` case, which also separates in cartesian coordinates.
//!
//! Each coordinate oscillates on its own:
//! `x² = (E₁ + √(E₁² − 4αω²) sin 4ω(t+C₁))/(2ω²)` and likewise for `y` with
//! `E₂ = E − E₁`, `β` and `C₂`. The phase difference of the two sines is
//! `S = 4ω(C₁ − C₂)`, folded into `[0, π]`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{PhaseState, SystemParams};

/// Relative slack on the admissibility inequalities.
const SLACK: f64 = 1e-12;
/// Relative tolerance for landing on the boundary curve or the dashed locus.
pub const LOCUS_TOLERANCE: f64 = 1e-12;

fn require_k1(params: &SystemParams) -> Result<()> {
    if !(params.k.numer() == 1 && params.k.denom() == 1) {
        return Err(Error::InvalidParams(format!(
            "cartesian separation needs k = 1, got k = {}",
            params.k
        )));
    }
    if !(params.omega > 0.0) {
        return Err(Error::InvalidParams("omega must be positive".into()));
    }
    Ok(())
}

fn fold_phase(s: f64) -> f64 {
    s.cos().clamp(-1.0, 1.0).acos()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianConstants {
    /// Energy of the `x` oscillation.
    pub e1: f64,
    /// Energy of the `y` oscillation.
    pub e2: f64,
    /// Phase difference `4ω(C₁ − C₂)` folded into `[0, π]`.
    pub s: f64,
    pub c1: f64,
    pub c2: f64,
}

impl CartesianConstants {
    pub fn new(e1: f64, e2: f64, c1: f64, c2: f64, params: &SystemParams) -> Result<Self> {
        require_k1(params)?;
        let w2 = 2.0 * params.omega;
        let lo1 = w2 * params.alpha.sqrt();
        let lo2 = w2 * params.beta.sqrt();
        if !(e1 >= lo1 * (1.0 - SLACK)) || !(e2 >= lo2 * (1.0 - SLACK)) {
            return Err(Error::InvalidParams(format!(
                "need E1 >= 2 omega sqrt(alpha) = {lo1} and E2 >= 2 omega sqrt(beta) = {lo2}, \
                 got E1 = {e1}, E2 = {e2}"
            )));
        }
        if !(c1.is_finite() && c2.is_finite()) {
            return Err(Error::InvalidParams("phases must be finite".into()));
        }
        Ok(Self {
            e1,
            e2,
            s: fold_phase(4.0 * params.omega * (c1 - c2)),
            c1,
            c2,
        })
    }

    /// Constants with `C₂ = 0` and `C₁ = S/(4ω)`.
    pub fn from_phase_difference(e1: f64, e2: f64, s: f64, params: &SystemParams) -> Result<Self> {
        require_k1(params)?;
        Self::new(e1, e2, s / (4.0 * params.omega), 0.0, params)
    }

    pub fn energy(&self) -> f64 {
        self.e1 + self.e2
    }

    /// `(√(E₁² − 4αω²), √(E₂² − 4βω²))`.
    pub fn amplitudes(&self, params: &SystemParams) -> (f64, f64) {
        let om2 = params.omega * params.omega;
        (
            (self.e1 * self.e1 - 4.0 * params.alpha * om2)
                .max(0.0)
                .sqrt(),
            (self.e2 * self.e2 - 4.0 * params.beta * om2)
                .max(0.0)
                .sqrt(),
        )
    }

    pub fn rectangle(&self, params: &SystemParams) -> Rectangle {
        let (d1, d2) = self.amplitudes(params);
        let w = 2.0 * params.omega * params.omega;
        Rectangle {
            x2_min: (self.e1 - d1) / w,
            x2_max: (self.e1 + d1) / w,
            y2_min: (self.e2 - d2) / w,
            y2_max: (self.e2 + d2) / w,
        }
    }
}

/// Bounds on `x²` and `y²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub x2_min: f64,
    pub x2_max: f64,
    pub y2_min: f64,
    pub y2_max: f64,
}

/// `(x²(t), y²(t))`.
pub fn cartesian_xy_of_t(cc: &CartesianConstants, params: &SystemParams, t: f64) -> (f64, f64) {
    let (d1, d2) = cc.amplitudes(params);
    let w = 2.0 * params.omega * params.omega;
    let f = 4.0 * params.omega;
    (
        (cc.e1 + d1 * (f * (t + cc.c1)).sin()) / w,
        (cc.e2 + d2 * (f * (t + cc.c2)).sin()) / w,
    )
}

/// Phase-space state at time `t` in the first quadrant, momenta from
/// `ẋ = 2p_x`.
pub fn cartesian_state_at(
    cc: &CartesianConstants,
    params: &SystemParams,
    t: f64,
) -> Result<PhaseState> {
    require_k1(params)?;
    let (x2, y2) = cartesian_xy_of_t(cc, params, t);
    if !(x2 > 0.0 && y2 > 0.0) {
        return Err(Error::InvalidParams(format!(
            "orbit reaches an axis: x^2 = {x2}, y^2 = {y2}"
        )));
    }
    let (d1, d2) = cc.amplitudes(params);
    let f = 4.0 * params.omega;
    let (x, y) = (x2.sqrt(), y2.sqrt());
    let px = d1 * (f * (t + cc.c1)).cos() / (2.0 * params.omega * x);
    let py = d2 * (f * (t + cc.c2)).cos() / (2.0 * params.omega * y);
    Ok(PhaseState::from_cartesian(t, [x, y, px, py]))
}

/// Both branches `(y²₊, y²₋)` of the eliminated orbit equation at `x`.
pub fn cartesian_orbit_y2_of_x(
    cc: &CartesianConstants,
    params: &SystemParams,
    x: f64,
) -> Result<(f64, f64)> {
    require_k1(params)?;
    let rect = cc.rectangle(params);
    let x2 = x * x;
    let slack = SLACK.sqrt() * rect.x2_max;
    if !(x2 >= rect.x2_min - slack && x2 <= rect.x2_max + slack) {
        return Err(Error::OutOfRectangle {
            x2,
            min: rect.x2_min,
            max: rect.x2_max,
        });
    }
    let (d1, d2) = cc.amplitudes(params);
    if d1 == 0.0 {
        return Err(Error::InvalidParams("x oscillation is frozen".into()));
    }
    let om = params.omega;
    let om2 = om * om;
    let inner = (-params.alpha + cc.e1 * x2 - om2 * x2 * x2).max(0.0).sqrt();
    let base = cc.s.cos() * (-cc.e1 + 2.0 * om2 * x2);
    let swing = 2.0 * om * cc.s.sin() * inner;
    let scale = d2 / (2.0 * om2 * d1);
    let mean = cc.e2 / (2.0 * om2);
    Ok((mean + scale * (base + swing), mean + scale * (base - swing)))
}

/// Closed polyline of the first-quadrant orbit from the eliminated
/// equation, with `x² = (E₁ + D₁ sin θ)/(2ω²)` on a uniform `θ` grid.
pub fn cartesian_curve(
    cc: &CartesianConstants,
    params: &SystemParams,
    n_per_branch: usize,
) -> Result<Vec<(f64, f64)>> {
    let (d1, _) = cc.amplitudes(params);
    let w = 2.0 * params.omega * params.omega;
    let n = n_per_branch.max(2);
    let xs: Vec<f64> = (0..n)
        .map(|j| {
            let theta = -PI / 2.0 + PI * j as f64 / (n - 1) as f64;
            ((cc.e1 + d1 * theta.sin()) / w).max(0.0).sqrt()
        })
        .collect();
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for &x in &xs {
        let (yp, ym) = cartesian_orbit_y2_of_x(cc, params, x)?;
        plus.push((x, yp.max(0.0).sqrt()));
        minus.push((x, ym.max(0.0).sqrt()));
    }
    minus.reverse();
    plus.extend(minus);
    Ok(plus)
}

/// Region of the `(E₁, A)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// `0 < cos C < 1`.
    I,
    /// `−1 < cos C < 0`.
    II,
    /// `cos C < −1`, lower half of the admissible `A` range.
    III,
    /// `cos C < −1`, upper half.
    IV,
    /// `cos C > 1`, lower half.
    V,
    /// `cos C > 1`, upper half.
    VI,
    /// `cos² C = 1`. `indeterminate` marks the `0/0` points where the
    /// dashed locus crosses the curve.
    OnCurve { indeterminate: bool },
    /// `cos C = 0`.
    OnDashed,
    /// Outside the admissible rectangle.
    Outside,
}

impl Region {
    /// Whether a real `C` exists.
    pub fn is_physical(self) -> bool {
        matches!(
            self,
            Region::I | Region::II | Region::OnCurve { .. } | Region::OnDashed
        )
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
            Region::V => "V",
            Region::VI => "VI",
            Region::OnCurve {
                indeterminate: false,
            } => "OnCurve",
            Region::OnCurve {
                indeterminate: true,
            } => "OnCurve0/0",
            Region::OnDashed => "OnDashed",
            Region::Outside => "Outside",
        };
        f.write_str(s)
    }
}

/// Admissible rectangle of the `(E₁, A)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionBounds {
    pub e1_min: f64,
    pub e1_max: f64,
    pub a_min: f64,
    pub a_max: f64,
}

impl RegionBounds {
    /// `2ω√α ≤ E₁ ≤ E − 2ω√β`, `(√α + √β)² ≤ A ≤ E²/(4ω²)`.
    pub fn new(params: &SystemParams, energy: f64) -> Self {
        let om = params.omega;
        let (sa, sb) = (params.alpha.sqrt(), params.beta.sqrt());
        Self {
            e1_min: 2.0 * om * sa,
            e1_max: energy - 2.0 * om * sb,
            a_min: (sa + sb).powi(2),
            a_max: energy * energy / (4.0 * om * om),
        }
    }

    pub fn contains(&self, e1: f64, a: f64) -> bool {
        let ta = SLACK * self.a_max.abs().max(1.0);
        let te = SLACK * self.e1_max.abs().max(1.0);
        e1 >= self.e1_min - te
            && e1 <= self.e1_max + te
            && a >= self.a_min - ta
            && a <= self.a_max + ta
    }
}

/// Numerator of the `cos C` map, zero on the dashed locus.
fn dashed_numerator(e1: f64, a: f64, params: &SystemParams, energy: f64) -> f64 {
    a * (2.0 * e1 - energy) - energy * (params.alpha - params.beta)
}

/// Quadratic whose zero set is `cos² C = 1`; negative where `|cos C| < 1`.
fn boundary_quadratic(e1: f64, a: f64, params: &SystemParams, energy: f64) -> f64 {
    let (al, be) = (params.alpha, params.beta);
    let om2 = params.omega * params.omega;
    om2 * a * a
        + a * (e1 * e1 - e1 * energy - 2.0 * (al + be) * om2)
        + energy * energy * al
        + e1 * energy * (be - al)
        + (al - be).powi(2) * om2
}

/// Values of `A` on the curve `cos² C = 1` above `e1`, ascending and
/// restricted to the admissible rectangle.
pub fn boundary_curve_a(e1: f64, params: &SystemParams, energy: f64) -> Vec<f64> {
    let bounds = RegionBounds::new(params, energy);
    let qa = params.omega * params.omega;
    let qb = boundary_quadratic(e1, 1.0, params, energy)
        - boundary_quadratic(e1, 0.0, params, energy)
        - qa;
    let qc = boundary_quadratic(e1, 0.0, params, energy);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    let mut out: Vec<f64> = [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)]
        .into_iter()
        .filter(|&a| bounds.contains(e1, a))
        .collect();
    out.dedup_by(|x, y| (*x - *y).abs() <= LOCUS_TOLERANCE * y.abs().max(1.0));
    out
}

/// Value of `A` on the dashed locus `cos C = 0` above `e1`, if it lies in
/// the admissible rectangle.
pub fn dashed_locus_a(e1: f64, params: &SystemParams, energy: f64) -> Option<f64> {
    let slope = 2.0 * e1 - energy;
    if slope == 0.0 {
        return None;
    }
    let a = energy * (params.alpha - params.beta) / slope;
    RegionBounds::new(params, energy)
        .contains(e1, a)
        .then_some(a)
}

/// Classifies `(E₁, A)` by the signs of the boundary quadratic and the
/// dashed-locus numerator. The pairs III/IV and V/VI are split at the
/// middle of the admissible `A` range.
pub fn classify_region(e1: f64, a: f64, params: &SystemParams, energy: f64) -> Region {
    let bounds = RegionBounds::new(params, energy);
    if !bounds.contains(e1, a) {
        return Region::Outside;
    }
    let om2 = params.omega * params.omega;
    let n = dashed_numerator(e1, a, params, energy);
    let q = boundary_quadratic(e1, a, params, energy);
    let n_scale = a.abs() * energy.abs() + energy.abs() * (params.alpha - params.beta).abs();
    let q_scale = om2 * a * a
        + a * (e1 * e1 + e1.abs() * energy.abs())
        + energy * energy * params.alpha.max(params.beta);
    let on_dashed = n.abs() <= LOCUS_TOLERANCE * n_scale.max(1.0);
    if q.abs() <= LOCUS_TOLERANCE * q_scale.max(1.0) {
        return Region::OnCurve {
            indeterminate: on_dashed,
        };
    }
    if on_dashed {
        return Region::OnDashed;
    }
    let upper = a > 0.5 * (bounds.a_min + bounds.a_max);
    match (q < 0.0, n > 0.0) {
        (true, true) => Region::I,
        (true, false) => Region::II,
        (false, false) if upper => Region::IV,
        (false, false) => Region::III,
        (false, true) if upper => Region::VI,
        (false, true) => Region::V,
    }
}

/// Polar constants of a cartesian orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarMap {
    pub a: f64,
    /// Raw value of the map, which may leave `[−1, 1]` outside regions I and II.
    pub cos_c: f64,
    pub region: Region,
}

impl PolarMap {
    /// `C = arccos(cos C) ∈ [0, π]` when it exists.
    pub fn c(&self) -> Option<f64> {
        (self.cos_c.abs() <= 1.0 + 1e-12).then(|| self.cos_c.clamp(-1.0, 1.0).acos())
    }
}

/// `A` and `cos C` of the polar description of the orbit with constants `cc`.
pub fn constants_cartesian_to_polar(
    cc: &CartesianConstants,
    params: &SystemParams,
) -> Result<PolarMap> {
    require_k1(params)?;
    let (al, be) = (params.alpha, params.beta);
    let om2 = params.omega * params.omega;
    let energy = cc.energy();
    let (d1, d2) = cc.amplitudes(params);
    let a = (cc.e1 * cc.e2 + 2.0 * (al + be) * om2 - d1 * d2 * cc.s.cos()) / (2.0 * om2);
    let bound = (al.sqrt() + be.sqrt()).powi(2);
    if a < bound * (1.0 - SLACK) {
        return Err(Error::DenominatorComplex { a, bound });
    }
    Ok(PolarMap {
        a,
        cos_c: polar_cos_c(cc.e1, a, params, energy),
        region: classify_region(cc.e1, a, params, energy),
    })
}

/// Raw `cos C` at the point `(E₁, A)` of the region map. Infinite on the
/// edges where the denominator vanishes, `NaN` where both parts do.
pub fn polar_cos_c(e1: f64, a: f64, params: &SystemParams, energy: f64) -> f64 {
    let (al, be) = (params.alpha, params.beta);
    let om2 = params.omega * params.omega;
    let angular = (a * a + (al - be).powi(2) - 2.0 * a * (al + be)).max(0.0);
    let radial = (energy * energy - 4.0 * om2 * a).max(0.0);
    let num = dashed_numerator(e1, a, params, energy);
    let den = (angular * radial).sqrt();
    if den == 0.0 {
        if num == 0.0 {
            f64::NAN
        } else {
            num.signum() * f64::INFINITY
        }
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{hamiltonian, xk_value};
    use crate::types::Rational;

    fn params() -> SystemParams {
        SystemParams::new(2.0, 3.0, 2.0, Rational::integer(1).unwrap()).unwrap()
    }

    #[test]
    fn rejects_other_k_and_low_energies() {
        let p2 = SystemParams::new(2.0, 3.0, 2.0, Rational::integer(2).unwrap()).unwrap();
        assert!(CartesianConstants::new(10.0, 10.0, 0.0, 0.0, &p2).is_err());
        assert!(CartesianConstants::new(5.0, 15.0, 0.0, 0.0, &params()).is_err());
    }

    #[test]
    fn x_law_examples() {
        let p = params();
        let cc = CartesianConstants::new(10.0, 10.0, 0.0, 0.1, &p).unwrap();
        let (x2, _) = cartesian_xy_of_t(&cc, &p, 0.0);
        assert!((x2 - 1.25).abs() < 1e-15);
        let (x2, _) = cartesian_xy_of_t(&cc, &p, PI / 16.0);
        assert!((x2 - cc.rectangle(&p).x2_max).abs() < 1e-12);
        let frozen = CartesianConstants::new(4.0 * 3f64.sqrt(), 10.0, 0.0, 0.0, &p).unwrap();
        for t in [0.0, 0.2, 0.5] {
            let (x2, _) = cartesian_xy_of_t(&frozen, &p, t);
            assert!((x2 - frozen.e1 / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn energies_split_and_map_matches_the_angular_integral() {
        let p = params();
        let cc = CartesianConstants::new(9.0, 11.0, 0.13, 0.02, &p).unwrap();
        let map = constants_cartesian_to_polar(&cc, &p).unwrap();
        for j in 0..7 {
            let s = cartesian_state_at(&cc, &p, 0.1 * j as f64).unwrap();
            assert!((hamiltonian(&s, &p).unwrap() - 20.0).abs() < 1e-10);
            assert!((xk_value(&s, &p).unwrap() - map.a).abs() < 1e-9);
        }
    }

    #[test]
    fn map_example_at_quarter_phase() {
        let p = params();
        let cc = CartesianConstants::from_phase_difference(10.0, 10.0, PI / 2.0, &p).unwrap();
        let map = constants_cartesian_to_polar(&cc, &p).unwrap();
        assert!((map.a - 17.5).abs() < 1e-12);
        let den = ((17.5f64 * 17.5 + 1.0 - 175.0) * (400.0 - 16.0 * 17.5)).sqrt();
        assert!((map.cos_c + 20.0 / den).abs() < 1e-12);
        assert_eq!(map.region, Region::II);
    }

    #[test]
    fn orbit_equation_holds_along_the_time_law() {
        let p = params();
        let cc = CartesianConstants::new(9.0, 11.0, 0.13, 0.02, &p).unwrap();
        for j in 0..40 {
            let (x2, y2) = cartesian_xy_of_t(&cc, &p, 0.02 * j as f64);
            let (yp, ym) = cartesian_orbit_y2_of_x(&cc, &p, x2.sqrt()).unwrap();
            assert!((yp - y2).abs().min((ym - y2).abs()) < 1e-9);
        }
        assert!(matches!(
            cartesian_orbit_y2_of_x(&cc, &p, 10.0),
            Err(Error::OutOfRectangle { .. })
        ));
    }

    #[test]
    fn zero_phase_difference_collapses_the_branches() {
        let p = params();
        for s in [0.0, PI] {
            let cc = CartesianConstants::from_phase_difference(9.0, 11.0, s, &p).unwrap();
            let rect = cc.rectangle(&p);
            let x = (0.5 * (rect.x2_min + rect.x2_max)).sqrt();
            let (yp, ym) = cartesian_orbit_y2_of_x(&cc, &p, x).unwrap();
            assert!((yp - ym).abs() < 1e-12);
        }
    }

    #[test]
    fn region_labels() {
        let p = params();
        assert_eq!(classify_region(12.0, 12.0, &p, 20.0), Region::I);
        assert_eq!(classify_region(8.0, 12.0, &p, 20.0), Region::II);
        assert_eq!(classify_region(8.0, 11.0, &p, 20.0), Region::III);
        assert_eq!(classify_region(7.0, 20.0, &p, 20.0), Region::IV);
        assert_eq!(classify_region(14.0, 11.0, &p, 20.0), Region::V);
        assert_eq!(classify_region(14.0, 20.0, &p, 20.0), Region::VI);
        assert_eq!(classify_region(1.0, 12.0, &p, 20.0), Region::Outside);
        // A(2E₁ − E) = E(α − β) at A = 20, E₁ = 10.5
        assert_eq!(classify_region(10.5, 20.0, &p, 20.0), Region::OnDashed);
    }

    #[test]
    fn curve_points_are_classified_on_curve() {
        let p = params();
        // Solve the quadratic for A at E₁ = 10 and take the smaller root.
        let e1: f64 = 10.0;
        let (qa, qb, qc) = (
            4.0,
            e1 * e1 - e1 * 20.0 - 40.0,
            400.0 * 3.0 - e1 * 20.0 + 4.0,
        );
        let a = (-qb - (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa);
        assert!(matches!(
            classify_region(e1, a, &p, 20.0),
            Region::OnCurve { .. }
        ));
    }

    #[test]
    fn mapped_a_never_drops_below_the_denominator_bound() {
        let p = params();
        let bound = (3f64.sqrt() + 2f64.sqrt()).powi(2);
        // Equal rapidities at S = 0 reach the bound exactly.
        let u: f64 = 0.7;
        let e1 = 4.0 * 3f64.sqrt() * u.cosh();
        let e2 = 4.0 * 2f64.sqrt() * u.cosh();
        let cc = CartesianConstants::from_phase_difference(e1, e2, 0.0, &p).unwrap();
        let map = constants_cartesian_to_polar(&cc, &p).unwrap();
        assert!((map.a - bound).abs() < 1e-12 * bound);
        for j in 0..50 {
            let e1 = 7.0 + 0.14 * j as f64;
            for s in [0.0, 0.3, 1.0, 2.0, PI] {
                let cc = CartesianConstants::from_phase_difference(e1, 20.0 - e1, s, &p).unwrap();
                assert!(constants_cartesian_to_polar(&cc, &p).unwrap().a >= bound * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn loci_are_classified_as_such() {
        let p = params();
        for j in 1..40 {
            let e1 = 7.0 + 0.15 * j as f64;
            for a in boundary_curve_a(e1, &p, 20.0) {
                assert!(
                    matches!(classify_region(e1, a, &p, 20.0), Region::OnCurve { .. }),
                    "{e1} {a}"
                );
            }
            if let Some(a) = dashed_locus_a(e1, &p, 20.0) {
                let r = classify_region(e1, a, &p, 20.0);
                assert!(
                    matches!(
                        r,
                        Region::OnDashed
                            | Region::OnCurve {
                                indeterminate: true
                            }
                    ),
                    "{r}"
                );
            }
        }
        assert!(dashed_locus_a(10.0, &p, 20.0).is_none());
    }
}
