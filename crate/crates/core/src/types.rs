//! Shared domain types, parameter validation and sector geometry.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|sin 2kφ|` below this is treated as lying on a sector wall.
pub const WALL_TOLERANCE: f64 = 1e-12;

/// Relative tolerance used to recognise `E² − 4ω²A = 0`.
pub const CIRCLE_TOLERANCE: f64 = 1e-12;

/// Exact positive rational `m/n` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Rational {
    m: u32,
    n: u32,
}

impl Rational {
    /// Builds `m/n`, reducing to lowest terms.
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParams(format!(
                "k = {m}/{n}: numerator and denominator must be positive"
            )));
        }
        let g = m.gcd(&n);
        Ok(Self { m: m / g, n: n / g })
    }

    pub fn integer(m: u32) -> Result<Self> {
        Self::new(m, 1)
    }

    pub fn numer(&self) -> u32 {
        self.m
    }

    pub fn denom(&self) -> u32 {
        self.n
    }

    pub fn is_integer(&self) -> bool {
        self.n == 1
    }

    pub fn value(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "{}", self.m)
        } else {
            write!(f, "{}/{}", self.m, self.n)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("k = '{s}': {e}")))
        };
        match s.split_once('/') {
            Some((m, n)) => Rational::new(parse(m)?, parse(n)?),
            None => Rational::new(parse(s)?, 1),
        }
    }
}

impl TryFrom<String> for Rational {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Rational> for String {
    fn from(k: Rational) -> String {
        k.to_string()
    }
}

/// Physical constants `ω, α, β` and the deformation parameter `k = m/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub k: Rational,
}

impl SystemParams {
    pub fn new(omega: f64, alpha: f64, beta: f64, k: Rational) -> Result<Self> {
        for (name, v) in [("omega", omega), ("alpha", alpha), ("beta", beta)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} must be finite and non-negative"
                )));
            }
        }
        Ok(Self {
            omega,
            alpha,
            beta,
            k,
        })
    }

    pub fn k(&self) -> f64 {
        self.k.value()
    }

    pub fn k2(&self) -> f64 {
        let k = self.k();
        k * k
    }

    /// Angular width `π/(2k)` of one sector.
    pub fn sector_width(&self) -> f64 {
        PI * self.k.denom() as f64 / (2.0 * self.k.numer() as f64)
    }

    /// Period `π/(2ω)` of `r²(t)`.
    pub fn radial_period(&self) -> f64 {
        PI / (2.0 * self.omega)
    }

    /// Period `nπ/m` of `r` as a function of `φ`.
    pub fn angular_period(&self) -> f64 {
        PI * self.k.denom() as f64 / self.k.numer() as f64
    }

    /// `(A − αk² + βk²)² − 4Aβk²`, equal to `[A − (α+β)k²]² − 4αβk⁴`.
    pub fn angular_discriminant(&self, a: f64) -> f64 {
        let k2 = self.k2();
        let b = a - self.alpha * k2 + self.beta * k2;
        b * b - 4.0 * a * self.beta * k2
    }
}

/// Values of the integrals and the two phase constants of one orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionConstants {
    pub energy: f64,
    pub a: f64,
    /// Trajectory phase constant, canonicalised to `[0, π]`.
    pub c: f64,
    pub delta1: f64,
}

impl MotionConstants {
    pub fn new(energy: f64, a: f64, c: f64, delta1: f64) -> Self {
        Self {
            energy,
            a,
            c,
            delta1,
        }
    }
}

/// Polar phase-space point with its time stamp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub r: f64,
    pub phi: f64,
    pub p_r: f64,
    pub p_phi: f64,
}

impl PhaseState {
    pub fn new(t: f64, r: f64, phi: f64, p_r: f64, p_phi: f64) -> Self {
        Self {
            t,
            r,
            phi,
            p_r,
            p_phi,
        }
    }

    pub(crate) fn to_array(self) -> [f64; 4] {
        [self.r, self.phi, self.p_r, self.p_phi]
    }

    pub(crate) fn from_array(t: f64, y: [f64; 4]) -> Self {
        Self::new(t, y[0], y[1], y[2], y[3])
    }

    /// Cartesian `(x, y, p_x, p_y)` of the same point.
    pub fn to_cartesian(&self) -> [f64; 4] {
        let (s, c) = self.phi.sin_cos();
        let x = self.r * c;
        let y = self.r * s;
        let px = self.p_r * c - self.p_phi * s / self.r;
        let py = self.p_r * s + self.p_phi * c / self.r;
        [x, y, px, py]
    }

    /// Inverse of [`PhaseState::to_cartesian`]; `φ` is returned in `(−π, π]`.
    pub fn from_cartesian(t: f64, q: [f64; 4]) -> Self {
        let [x, y, px, py] = q;
        let r = x.hypot(y);
        Self::new(t, r, y.atan2(x), (x * px + y * py) / r, x * py - y * px)
    }

    /// Maximum componentwise distance, with `φ` compared modulo `2π`.
    pub fn distance(&self, other: &PhaseState) -> f64 {
        [
            (self.r - other.r).abs(),
            angle_difference(self.phi, other.phi).abs(),
            (self.p_r - other.p_r).abs(),
            (self.p_phi - other.p_phi).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `a − b` wrapped into `(−π, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}

/// Values of `H` and `X_k` at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conserved {
    pub h: f64,
    pub x: f64,
}

/// Time series of phase-space samples with the integrals evaluated on each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: SystemParams,
    pub samples: Vec<PhaseState>,
    pub conserved: Vec<Conserved>,
}

impl Trajectory {
    pub fn initial(&self) -> &PhaseState {
        &self.samples[0]
    }

    pub fn span(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.t - a.t,
            _ => 0.0,
        }
    }

    /// Largest relative drift of `(H, X_k)` from their initial values.
    pub fn max_relative_drift(&self) -> (f64, f64) {
        let Some(first) = self.conserved.first() else {
            return (0.0, 0.0);
        };
        let rel = |v: f64, v0: f64| {
            if v0 == 0.0 {
                v.abs()
            } else {
                ((v - v0) / v0).abs()
            }
        };
        self.conserved.iter().fold((0.0, 0.0), |(dh, dx), c| {
            (dh.max(rel(c.h, first.h)), dx.max(rel(c.x, first.x)))
        })
    }
}

/// Outcome of the boundedness analysis of a pair `(E, A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Bounded,
    Unbounded,
    Circle,
    Segment,
    HarmonicLimit,
}

/// One strict inequality required for bounded closed motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    OmegaPositive,
    APositive,
    AlphaPositive,
    BetaPositive,
    BarrierDifference,
    AngularDiscriminant,
    RadialDiscriminant,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::OmegaPositive => "omega > 0",
            Condition::APositive => "A > 0",
            Condition::AlphaPositive => "alpha > 0",
            Condition::BetaPositive => "beta > 0",
            Condition::BarrierDifference => "A > k^2 |beta - alpha|",
            Condition::AngularDiscriminant => "[A - (alpha + beta) k^2]^2 - 4 alpha beta k^4 > 0",
            Condition::RadialDiscriminant => "E^2 - 4 omega^2 A > 0",
        };
        f.write_str(s)
    }
}

/// Turning intervals and the boundedness verdict.
///
/// Fields that are undefined for the given constants are `NaN`. The bounds
/// are the same in every sector; `sector` names the one they are quoted for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub r2_min: f64,
    pub r2_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub sector: i64,
    pub verdict: Verdict,
    pub violations: Vec<Condition>,
}

/// Index `n` of the sector `nπ/(2k) < φ < (n+1)π/(2k)` containing `phi`.
pub fn sector_of(phi: f64, k: Rational) -> Result<i64> {
    let kv = k.value();
    let sin2k = (2.0 * kv * phi).sin();
    if sin2k.abs() < WALL_TOLERANCE {
        return Err(Error::BoundaryAngle { phi, sin2k });
    }
    let width = PI * k.denom() as f64 / (2.0 * k.numer() as f64);
    Ok((phi / width).floor() as i64)
}

/// Radial turning points `(r₁², r₂²)` of `−A + Er² − ω²r⁴ = 0`.
pub fn radial_bounds(energy: f64, a: f64, omega: f64) -> Result<(f64, f64)> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParams(format!(
            "omega = {omega}: radial turning points need omega > 0"
        )));
    }
    let w2 = omega * omega;
    let disc = energy * energy - 4.0 * w2 * a;
    if disc < -CIRCLE_TOLERANCE * energy * energy {
        return Err(Error::ComplexRoots { discriminant: disc });
    }
    let sq = disc.max(0.0).sqrt();
    let r2_max = (energy + sq) / (2.0 * w2);
    // r₁² r₂² = A/ω²
    let r2_min = if r2_max > 0.0 {
        a / (w2 * r2_max)
    } else {
        (energy - sq) / (2.0 * w2)
    };
    Ok((r2_min, r2_max))
}

/// Angular turning points `(z₁, z₂)` of `Az² − (A − αk² + βk²)z + βk² = 0`,
/// with `z = sin²kφ`.
pub fn angular_bounds(a: f64, alpha: f64, beta: f64, k: Rational) -> Result<(f64, f64)> {
    if !(a > 0.0) {
        return Err(Error::InvalidParams(format!(
            "A = {a}: angular turning points need A > 0"
        )));
    }
    let k2 = k.value() * k.value();
    let b = a - alpha * k2 + beta * k2;
    let disc = b * b - 4.0 * a * beta * k2;
    if disc < 0.0 {
        return Err(Error::ComplexRoots { discriminant: disc });
    }
    let sq = disc.sqrt();
    if b < 0.0 {
        return Err(Error::OutOfUnitInterval {
            value: (b - sq) / (2.0 * a),
        });
    }
    let z2 = (b + sq) / (2.0 * a);
    let z1 = if b + sq > 0.0 {
        2.0 * beta * k2 / (b + sq)
    } else {
        0.0
    };
    for z in [z1, z2] {
        if !(-1e-12..=1.0 + 1e-12).contains(&z) {
            return Err(Error::OutOfUnitInterval { value: z });
        }
    }
    Ok((z1, z2))
}

/// Evaluates the boundedness conditions on `(E, A)` and classifies the
/// degenerate equality cases. Never fails: every outcome is a verdict.
pub fn check_boundedness(params: &SystemParams, energy: f64, a: f64) -> BoundsReport {
    let SystemParams {
        omega, alpha, beta, ..
    } = *params;
    let k2 = params.k2();
    let rdisc = energy * energy - 4.0 * omega * omega * a;
    let zdisc = params.angular_discriminant(a);

    let mut violations = Vec::new();
    let checks = [
        (omega > 0.0, Condition::OmegaPositive),
        (a > 0.0, Condition::APositive),
        (alpha > 0.0, Condition::AlphaPositive),
        (beta > 0.0, Condition::BetaPositive),
        (a > k2 * (beta - alpha).abs(), Condition::BarrierDifference),
        (zdisc > 0.0, Condition::AngularDiscriminant),
        (rdisc > 0.0, Condition::RadialDiscriminant),
    ];
    for (ok, cond) in checks {
        if !ok {
            violations.push(cond);
        }
    }

    let (r2_min, r2_max) = radial_bounds(energy, a, omega).unwrap_or((f64::NAN, f64::NAN));
    let (z_min, z_max) = angular_bounds(a, alpha, beta, params.k).unwrap_or((f64::NAN, f64::NAN));

    let is_circle = a > 0.0 && rdisc.abs() <= CIRCLE_TOLERANCE * energy * energy;
    let verdict = if !(omega > 0.0) {
        Verdict::Unbounded
    } else if a == 0.0 && energy > 0.0 {
        Verdict::HarmonicLimit
    } else if is_circle {
        Verdict::Circle
    } else if violations.is_empty() {
        Verdict::Bounded
    } else {
        Verdict::Unbounded
    };

    BoundsReport {
        r2_min,
        r2_max,
        z_min,
        z_max,
        sector: 0,
        verdict,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(m: u32, n: u32) -> Rational {
        Rational::new(m, n).unwrap()
    }

    fn fig_params() -> SystemParams {
        SystemParams::new(2.0, 3.0, 2.0, k(1, 1)).unwrap()
    }

    #[test]
    fn rational_reduces_and_parses() {
        assert_eq!(k(4, 2), k(2, 1));
        assert_eq!("3/2".parse::<Rational>().unwrap(), k(3, 2));
        assert_eq!("4".parse::<Rational>().unwrap(), k(4, 1));
        assert!("0/3".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
        assert_eq!(k(6, 4).to_string(), "3/2");
    }

    #[test]
    fn params_reject_negative_constants() {
        assert!(SystemParams::new(-1.0, 1.0, 1.0, k(1, 1)).is_err());
        assert!(SystemParams::new(1.0, f64::NAN, 1.0, k(1, 1)).is_err());
        assert!(SystemParams::new(0.0, 0.0, 0.0, k(1, 1)).is_ok());
    }

    #[test]
    fn sector_examples() {
        assert_eq!(sector_of(PI / 4.0, k(1, 1)).unwrap(), 0);
        assert_eq!(sector_of(3.0 * PI / 4.0, k(1, 1)).unwrap(), 1);
        assert_eq!(sector_of(PI / 6.0, k(3, 2)).unwrap(), 0);
        assert_eq!(sector_of(-PI / 4.0, k(1, 1)).unwrap(), -1);
    }

    #[test]
    fn sector_wall_is_rejected() {
        assert!(matches!(
            sector_of(PI / 2.0, k(1, 1)),
            Err(Error::BoundaryAngle { .. })
        ));
        assert!(matches!(
            sector_of(0.0, k(3, 2)),
            Err(Error::BoundaryAngle { .. })
        ));
    }

    #[test]
    fn boundedness_examples() {
        let p = fig_params();
        let rep = check_boundedness(&p, 20.0, 12.0);
        assert_eq!(rep.verdict, Verdict::Bounded);
        assert!(rep.violations.is_empty());
        // E² − 4ω²A = 208, A − k²|β−α| = 11, [A − (α+β)]² − 4αβ = 25
        assert_eq!(20.0f64 * 20.0 - 4.0 * 4.0 * 12.0, 208.0);
        assert_eq!(p.angular_discriminant(12.0), 25.0);

        assert_eq!(check_boundedness(&p, 20.0, 25.0).verdict, Verdict::Circle);
        assert_eq!(
            check_boundedness(&p, 20.0, 0.0).verdict,
            Verdict::HarmonicLimit
        );
        let free = SystemParams::new(0.0, 3.0, 2.0, k(1, 1)).unwrap();
        assert_eq!(
            check_boundedness(&free, 20.0, 12.0).verdict,
            Verdict::Unbounded
        );
    }

    #[test]
    fn violated_conditions_are_named() {
        let p = fig_params();
        let rep = check_boundedness(&p, 20.0, 30.0);
        assert_eq!(rep.verdict, Verdict::Unbounded);
        assert_eq!(rep.violations, vec![Condition::RadialDiscriminant]);

        let no_beta = SystemParams::new(2.0, 3.0, 0.0, k(1, 1)).unwrap();
        let rep = check_boundedness(&no_beta, 20.0, 12.0);
        assert!(rep.violations.contains(&Condition::BetaPositive));
        assert_eq!(rep.verdict, Verdict::Unbounded);
    }

    #[test]
    fn radial_bounds_examples() {
        let (lo, hi) = radial_bounds(20.0, 12.0, 2.0).unwrap();
        let sq = 208f64.sqrt();
        assert!((lo - (20.0 - sq) / 8.0).abs() < 1e-14);
        assert!((hi - (20.0 + sq) / 8.0).abs() < 1e-14);
        assert!((lo - 0.697224362268005).abs() < 1e-12);
        assert!((hi - 4.302775637731995).abs() < 1e-12);

        assert_eq!(radial_bounds(20.0, 25.0, 2.0).unwrap(), (2.5, 2.5));
        assert_eq!(radial_bounds(2.0, 0.0, 1.0).unwrap(), (0.0, 2.0));
        assert!(matches!(
            radial_bounds(20.0, 30.0, 2.0),
            Err(Error::ComplexRoots { .. })
        ));
    }

    #[test]
    fn angular_bounds_examples() {
        let (z1, z2) = angular_bounds(12.0, 3.0, 2.0, k(1, 1)).unwrap();
        assert!((z1 - 0.25).abs() < 1e-15);
        assert!((z2 - 2.0 / 3.0).abs() < 1e-15);

        // k = 2, A = 60: b = 56, disc = 1216
        let (z1, z2) = angular_bounds(60.0, 3.0, 2.0, k(2, 1)).unwrap();
        let sq = 1216f64.sqrt();
        assert!((z1 - (56.0 - sq) / 120.0).abs() < 1e-14);
        assert!((z2 - (56.0 + sq) / 120.0).abs() < 1e-14);
        assert!((z1 + z2 - 56.0 / 60.0).abs() < 1e-12);
        assert!((z1 * z2 - 8.0 / 60.0).abs() < 1e-12);

        let (z1, z2) = angular_bounds(30.0, 1.5, 1.5, k(3, 2)).unwrap();
        assert!((z1 + z2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn angular_bounds_errors() {
        // b² < 4Aβk²
        assert!(matches!(
            angular_bounds(1.0, 3.0, 2.0, k(1, 1)),
            Err(Error::ComplexRoots { .. })
        ));
        assert!(matches!(
            angular_bounds(0.5, 3.0, 0.0, k(1, 1)),
            Err(Error::OutOfUnitInterval { .. })
        ));
    }

    #[test]
    fn discriminant_forms_agree() {
        // (A − αk² + βk²)² − 4Aβk² = [A − (α+β)k²]² − 4αβk⁴
        for (a, al, be, kk) in [(12.0, 3.0, 2.0, k(1, 1)), (10.0, 0.25, 0.125, k(3, 2))] {
            let p = SystemParams::new(2.0, al, be, kk).unwrap();
            let k2 = p.k2();
            let sym = (a - (al + be) * k2).powi(2) - 4.0 * al * be * k2 * k2;
            assert!((p.angular_discriminant(a) - sym).abs() < 1e-12 * sym.abs());
        }
    }

    #[test]
    fn phase_state_cartesian_round_trip() {
        let s = PhaseState::new(0.5, 1.3, 0.7, -0.4, 2.2);
        let back = PhaseState::from_cartesian(0.5, s.to_cartesian());
        assert!(s.distance(&back) < 1e-14);
    }

    proptest! {
        #[test]
        fn vieta_identities(a in 1.0f64..200.0, al in 0.01f64..5.0, be in 0.01f64..5.0,
                            m in 1u32..5, n in 1u32..4) {
            let kk = Rational::new(m, n).unwrap();
            if let Ok((z1, z2)) = angular_bounds(a, al, be, kk) {
                let k2 = kk.value() * kk.value();
                let sum = (a - al * k2 + be * k2) / a;
                let prod = be * k2 / a;
                prop_assert!(((z1 + z2) - sum).abs() <= 1e-12 * sum.abs());
                prop_assert!((z1 * z2 - prod).abs() <= 1e-12 * prod.abs());
            }
        }

        #[test]
        fn bounded_implies_ordered_intervals(e in 0.1f64..100.0, a in 0.01f64..100.0,
                                             al in 0.01f64..5.0, be in 0.01f64..5.0,
                                             w in 0.1f64..4.0, m in 1u32..5, n in 1u32..4) {
            let p = SystemParams::new(w, al, be, Rational::new(m, n).unwrap()).unwrap();
            let rep = check_boundedness(&p, e, a);
            if rep.verdict == Verdict::Bounded {
                prop_assert!(0.0 < rep.r2_min && rep.r2_min < rep.r2_max);
                prop_assert!(0.0 < rep.z_min && rep.z_min < rep.z_max && rep.z_max < 1.0);
            }
        }

        #[test]
        fn verdict_symmetric_under_barrier_swap(e in 0.1f64..100.0, a in 0.0f64..100.0,
                                                al in 0.0f64..5.0, be in 0.0f64..5.0,
                                                w in 0.0f64..4.0, m in 1u32..5, n in 1u32..4) {
            let kk = Rational::new(m, n).unwrap();
            let p = SystemParams::new(w, al, be, kk).unwrap();
            let q = SystemParams::new(w, be, al, kk).unwrap();
            prop_assert_eq!(check_boundedness(&p, e, a).verdict, check_boundedness(&q, e, a).verdict);
        }

        #[test]
        fn sector_shifts_by_whole_sectors(phi in 0.01f64..1.5, j in -6i64..6, m in 1u32..5, n in 1u32..4) {
            let kk = Rational::new(m, n).unwrap();
            let width = PI * n as f64 / (2.0 * m as f64);
            let base = phi * width / 1.6;
            if let Ok(s0) = sector_of(base, kk) {
                let shifted = base + j as f64 * width;
                if let Ok(s1) = sector_of(shifted, kk) {
                    prop_assert_eq!(s1, s0 + j);
                }
            }
        }
    }
}
