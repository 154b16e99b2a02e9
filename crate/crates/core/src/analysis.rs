//! Singular points, closure and period measurement, degenerate cases.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::closedform::chebyshev::t_unchecked;
use crate::closedform::{
    critical_points, solve_chebyshev, AngularReduction, Branch, OrbitEquation, RadialReduction,
};
use crate::dynamics::{eom, hamiltonian, propagate, xk_value, IntegratorConfig};
use crate::error::{Error, Result};
use crate::types::{
    angle_difference, check_boundedness, MotionConstants, PhaseState, SystemParams, Trajectory,
    Verdict, WALL_TOLERANCE,
};

/// Residual below which a singular candidate lies on the orbit.
pub const ON_ORBIT_TOLERANCE: f64 = 1e-8;
const CANDIDATE_MERGE: f64 = 1e-10;
const BISECTION_STEPS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub r: f64,
    /// Representative angle in sector 0.
    pub phi: f64,
    /// Critical value `R*` with `T_m'(R*) = 0`.
    pub r_star: f64,
    /// Reduced angle of the candidate.
    pub u: f64,
    pub on_trajectory: bool,
    /// Smallest `|T_m(R*) − rhs(U)|` over both branches.
    pub residual: f64,
}

/// Candidate points where `dr/dφ` is undefined: `R* = cos(jπ/m)` paired with
/// every `U` solving `T_n(U) = ±cos C`.
pub fn singular_points(eq: &OrbitEquation) -> Vec<SingularPoint> {
    let (m, n) = eq.kind.degrees();
    let c = eq.constants.c;
    let mut out = Vec::new();
    for r_star in critical_points(m) {
        let target = t_unchecked(m, r_star);
        let mut us: Vec<f64> = Vec::new();
        for sign in [1.0, -1.0] {
            let Ok(roots) = solve_chebyshev(n, sign * c.cos()) else {
                continue;
            };
            for u in roots {
                if us.iter().all(|v| (v - u).abs() > CANDIDATE_MERGE) {
                    us.push(u);
                }
            }
        }
        us.sort_by(|a, b| a.total_cmp(b));
        for u in us {
            let z = eq.angular().z_of(u);
            let phi = eq.angular().angle_in_sector(z, 0);
            let residual = Branch::BOTH
                .iter()
                .map(|b| (target - eq.rhs(u, *b)).abs())
                .fold(f64::INFINITY, f64::min);
            let on_wall = z <= WALL_TOLERANCE || z >= 1.0 - WALL_TOLERANCE;
            out.push(SingularPoint {
                r: eq.radial().radius(r_star),
                phi,
                r_star,
                u,
                on_trajectory: residual < ON_ORBIT_TOLERANCE && !on_wall,
                residual,
            });
        }
    }
    out
}

/// Number of distinct critical radii that the orbit actually reaches.
pub fn count_singular(points: &[SingularPoint]) -> usize {
    let mut radii: Vec<f64> = points
        .iter()
        .filter(|p| p.on_trajectory)
        .map(|p| p.r_star)
        .collect();
    radii.sort_by(|a, b| a.total_cmp(b));
    radii.dedup_by(|a, b| (*a - *b).abs() < CANDIDATE_MERGE);
    radii.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureOptions {
    /// Time offset for the closure comparison; the radial period by default.
    pub offset: Option<f64>,
    /// Number of starting times compared.
    pub starts: usize,
    /// Max-norm distance accepted as a full-state recurrence.
    pub recurrence_tol: f64,
    /// Used to refine events between stored samples.
    pub config: IntegratorConfig,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            offset: None,
            starts: 5,
            recurrence_tol: 1e-6,
            config: IntegratorConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    /// First return time of the full state, `NaN` if none within the span.
    pub period_estimate: f64,
    /// Twice the mean spacing of the radial turning points.
    pub radial_period_estimate: f64,
    /// `π/(2ω)`.
    pub radial_period: f64,
    pub closure_offset: f64,
    /// Largest state mismatch between `t₀` and `t₀ + closure_offset`.
    pub closure_gap: f64,
    /// Angular period `π/k`, with `k` measured as the ratio of the angular
    /// to the radial phase advance.
    pub k_period_angle: f64,
    pub n_singular: Option<usize>,
}

struct Sampler<'a> {
    traj: &'a Trajectory,
    config: IntegratorConfig,
}

impl Sampler<'_> {
    fn state_at(&self, t: f64) -> Result<PhaseState> {
        let samples = &self.traj.samples;
        let idx = samples.partition_point(|s| s.t <= t).saturating_sub(1);
        propagate(&samples[idx], &self.traj.params, t, &self.config)
    }

    /// Times in `(t_first, t_last]` where `f` changes sign, optionally only
    /// from negative to positive.
    fn events<F>(&self, f: F, rising_only: bool) -> Result<Vec<f64>>
    where
        F: Fn(&PhaseState) -> Result<f64>,
    {
        let samples = &self.traj.samples;
        let mut out = Vec::new();
        let mut prev = f(&samples[0])?;
        for w in samples.windows(2) {
            let cur = f(&w[1])?;
            let crosses = if rising_only {
                prev < 0.0 && cur >= 0.0
            } else {
                (prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)
            };
            if crosses {
                out.push(self.refine(&w[0], w[1].t, prev, &f)?);
            }
            prev = cur;
        }
        Ok(out)
    }

    fn refine<F>(&self, left: &PhaseState, t_right: f64, f_left: f64, f: &F) -> Result<f64>
    where
        F: Fn(&PhaseState) -> Result<f64>,
    {
        let (mut lo, mut hi) = (left.t, t_right);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let s = propagate(left, &self.traj.params, mid, &self.config)?;
            if (f(&s)? < 0.0) == (f_left < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

fn mean_spacing(times: &[f64]) -> f64 {
    if times.len() < 2 {
        f64::NAN
    } else {
        (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64
    }
}

/// Total advance of the radial phase divided by that of the angular phase,
/// both unwrapped along the samples.
fn phase_ratio(traj: &Trajectory) -> Option<f64> {
    let params = &traj.params;
    let s0 = traj.initial();
    let energy = hamiltonian(s0, params).ok()?;
    let a = xk_value(s0, params).ok()?;
    let radial = RadialReduction::new(energy, a, params.omega).ok()?;
    let angular = AngularReduction::new(params, a).ok()?;
    let k = params.k();
    let sqrt_a = a.sqrt();
    let phases = |s: &PhaseState| -> Option<(f64, f64)> {
        let rv = radial.reduce(s.r).ok()?;
        let psi = (-2.0 * sqrt_a * s.p_r / (s.r * radial.amplitude)).atan2(rv);
        let u = angular.reduce(s.phi).ok()?;
        let sin_chi = sqrt_a * (2.0 * k * s.phi).sin() * s.p_phi / angular.amplitude;
        Some((psi, sin_chi.atan2(u)))
    };
    let (mut psi, mut chi) = phases(s0)?;
    let (mut d_psi, mut d_chi) = (0.0, 0.0);
    for s in &traj.samples[1..] {
        let (p, c) = phases(s)?;
        d_psi += angle_difference(p, psi);
        d_chi += angle_difference(c, chi);
        psi = p;
        chi = c;
    }
    (d_chi != 0.0).then(|| d_psi / d_chi)
}

/// Measures periods and closure on a numerical trajectory.
pub fn measure_closure(traj: &Trajectory) -> Result<ClosureReport> {
    measure_closure_with(traj, &ClosureOptions::default())
}

pub fn measure_closure_with(traj: &Trajectory, opts: &ClosureOptions) -> Result<ClosureReport> {
    let params = traj.params;
    if !(params.omega > 0.0) {
        return Err(Error::NotBounded("closure needs omega > 0".into()));
    }
    let period = params.radial_period();
    let span = traj.span();
    if span < 2.0 * period * (1.0 - 1e-12) {
        return Err(Error::InsufficientSpan {
            span,
            required: 2.0 * period,
        });
    }
    let offset = opts.offset.unwrap_or(period);
    if !(offset > 0.0) || offset >= span {
        return Err(Error::InsufficientSpan {
            span,
            required: offset,
        });
    }
    let sampler = Sampler {
        traj,
        config: opts.config,
    };
    let s0 = *traj.initial();

    let radial_turns = sampler.events(|s| Ok(s.p_r), false)?;
    let radial_period_estimate = 2.0 * mean_spacing(&radial_turns);
    let k_period_angle = phase_ratio(traj).map_or(f64::NAN, |ratio| PI * ratio);

    // Minima of |s(t) − s₀|² are the rising zeros of (s − s₀)·ṡ.
    let approach = |s: &PhaseState| -> Result<f64> {
        let d = eom(s, &params)?;
        Ok((s.r - s0.r) * d.dr
            + angle_difference(s.phi, s0.phi) * d.dphi
            + (s.p_r - s0.p_r) * d.dp_r
            + (s.p_phi - s0.p_phi) * d.dp_phi)
    };
    let scale = 1.0 + s0.to_array().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut period_estimate = f64::NAN;
    for t in sampler.events(approach, true)? {
        if sampler.state_at(t)?.distance(&s0) < opts.recurrence_tol * scale {
            period_estimate = t - s0.t;
            break;
        }
    }

    let starts = opts.starts.max(1);
    let room = span - offset;
    let mut closure_gap: f64 = 0.0;
    for j in 0..starts {
        let t0 = s0.t + room * j as f64 / starts as f64;
        let a = sampler.state_at(t0)?;
        let b = sampler.state_at(t0 + offset)?;
        closure_gap = closure_gap.max(a.distance(&b));
    }

    let n_singular = OrbitEquation::from_state(&s0, params)
        .ok()
        .map(|eq| count_singular(&singular_points(&eq)));

    Ok(ClosureReport {
        period_estimate,
        radial_period_estimate,
        radial_period: period,
        closure_offset: offset,
        closure_gap,
        k_period_angle,
        n_singular,
    })
}

/// Extreme values of `r²` and `sin²kφ`, taken at the refined radial and
/// angular turning points of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningExtrema {
    pub r2_min: f64,
    pub r2_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub radial_turns: usize,
    pub angular_turns: usize,
}

pub fn turning_extrema(traj: &Trajectory, config: &IntegratorConfig) -> Result<TurningExtrema> {
    let sampler = Sampler {
        traj,
        config: *config,
    };
    let k = traj.params.k();
    let fold = |vals: Vec<f64>| {
        vals.iter()
            .fold((f64::NAN, f64::NAN), |(lo, hi), &v| (v.min(lo), v.max(hi)))
    };
    let radial = sampler.events(|s| Ok(s.p_r), false)?;
    let r2 = radial
        .iter()
        .map(|&t| sampler.state_at(t).map(|s| s.r * s.r))
        .collect::<Result<Vec<_>>>()?;
    let angular = sampler.events(|s| Ok(s.p_phi), false)?;
    let z = angular
        .iter()
        .map(|&t| sampler.state_at(t).map(|s| (k * s.phi).sin().powi(2)))
        .collect::<Result<Vec<_>>>()?;
    let (r2_min, r2_max) = fold(r2);
    let (z_min, z_max) = fold(z);
    Ok(TurningExtrema {
        r2_min,
        r2_max,
        z_min,
        z_max,
        radial_turns: radial.len(),
        angular_turns: angular.len(),
    })
}

/// Qualitative type of the motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degeneracy {
    GenericClosed,
    Segment,
    Circle,
    HarmonicLimit,
    Unbounded,
}

pub fn classify_degenerate(params: &SystemParams, constants: &MotionConstants) -> Degeneracy {
    let report = check_boundedness(params, constants.energy, constants.a);
    match report.verdict {
        Verdict::Bounded if constants.c.sin().abs() < 1e-12 => Degeneracy::Segment,
        Verdict::Bounded => Degeneracy::GenericClosed,
        Verdict::Segment => Degeneracy::Segment,
        Verdict::Circle => Degeneracy::Circle,
        Verdict::HarmonicLimit => Degeneracy::HarmonicLimit,
        Verdict::Unbounded => Degeneracy::Unbounded,
    }
}

/// Area enclosed by a closed polygon (shoelace formula, absolute value).
pub fn enclosed_area(points: &[(f64, f64)]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for (i, &(x0, y0)) in points.iter().enumerate() {
        let (x1, y1) = points[(i + 1) % points.len()];
        twice += x0 * y1 - x1 * y0;
    }
    0.5 * twice.abs()
}

/// Area of the parametric trace of `eq` in sector 0.
pub fn orbit_area(eq: &OrbitEquation, n_samples: usize) -> f64 {
    let pts: Vec<(f64, f64)> = eq.trace(n_samples, 0).iter().map(|p| p.xy()).collect();
    enclosed_area(&pts)
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

/// Segments of a polyline bucketed on a uniform grid.
struct SegmentGrid<'a> {
    pts: &'a [(f64, f64)],
    segs: Vec<(usize, usize)>,
    origin: (f64, f64),
    cell: f64,
    dims: (usize, usize),
    buckets: Vec<Vec<usize>>,
}

impl<'a> SegmentGrid<'a> {
    fn new(pts: &'a [(f64, f64)], closed: bool) -> Self {
        let mut segs: Vec<(usize, usize)> = (1..pts.len()).map(|i| (i - 1, i)).collect();
        if closed && pts.len() > 2 {
            segs.push((pts.len() - 1, 0));
        }
        if pts.len() == 1 {
            segs.push((0, 0));
        }
        let (mut lo, mut hi) = (
            (f64::INFINITY, f64::INFINITY),
            (f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for &(x, y) in pts {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        let side = ((segs.len() as f64).sqrt().ceil() as usize).clamp(1, 256);
        let extent = (hi.0 - lo.0).max(hi.1 - lo.1);
        let cell = if extent > 0.0 {
            extent / side as f64
        } else {
            1.0
        };
        let dims = (
            ((hi.0 - lo.0) / cell).floor() as usize + 1,
            ((hi.1 - lo.1) / cell).floor() as usize + 1,
        );
        let mut grid = Self {
            pts,
            segs,
            origin: lo,
            cell,
            dims,
            buckets: vec![Vec::new(); dims.0 * dims.1],
        };
        for (idx, &(i, j)) in grid.segs.iter().enumerate() {
            let (a, b) = (pts[i], pts[j]);
            let (cx0, cy0) = grid.cell_of((a.0.min(b.0), a.1.min(b.1)));
            let (cx1, cy1) = grid.cell_of((a.0.max(b.0), a.1.max(b.1)));
            for cx in cx0..=cx1 {
                for cy in cy0..=cy1 {
                    grid.buckets[cy * dims.0 + cx].push(idx);
                }
            }
        }
        grid
    }

    fn cell_of(&self, p: (f64, f64)) -> (usize, usize) {
        let fx = ((p.0 - self.origin.0) / self.cell).floor().max(0.0) as usize;
        let fy = ((p.1 - self.origin.1) / self.cell).floor().max(0.0) as usize;
        (fx.min(self.dims.0 - 1), fy.min(self.dims.1 - 1))
    }

    /// Distance from `p` to the polyline, searching rings of cells outward.
    fn distance(&self, p: (f64, f64)) -> f64 {
        let (cx, cy) = self.cell_of(p);
        let outside = {
            let gx = (self.origin.0 - p.0)
                .max(p.0 - self.origin.0 - self.dims.0 as f64 * self.cell)
                .max(0.0);
            let gy = (self.origin.1 - p.1)
                .max(p.1 - self.origin.1 - self.dims.1 as f64 * self.cell)
                .max(0.0);
            gx.hypot(gy)
        };
        let mut best = f64::INFINITY;
        let max_ring = self.dims.0.max(self.dims.1);
        for ring in 0..=max_ring {
            let (x0, x1) = (cx.saturating_sub(ring), (cx + ring).min(self.dims.0 - 1));
            let (y0, y1) = (cy.saturating_sub(ring), (cy + ring).min(self.dims.1 - 1));
            for gx in x0..=x1 {
                for gy in y0..=y1 {
                    let on_ring =
                        gx + ring == cx || gx == cx + ring || gy + ring == cy || gy == cy + ring;
                    if !on_ring {
                        continue;
                    }
                    for &idx in &self.buckets[gy * self.dims.0 + gx] {
                        let (i, j) = self.segs[idx];
                        best = best.min(segment_distance(p, self.pts[i], self.pts[j]));
                    }
                }
            }
            if best <= outside + ring as f64 * self.cell {
                break;
            }
        }
        best
    }
}

/// Largest distance from a point of `from` to the polyline through `to`.
pub fn directed_hausdorff(from: &[(f64, f64)], to: &[(f64, f64)], to_closed: bool) -> f64 {
    if from.is_empty() || to.is_empty() {
        return f64::INFINITY;
    }
    let grid = SegmentGrid::new(to, to_closed);
    from.iter().map(|&p| grid.distance(p)).fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two polylines, measured from the
/// vertices of each to the segments of the other.
pub fn hausdorff_distance(a: &[(f64, f64)], b: &[(f64, f64)], closed: bool) -> f64 {
    directed_hausdorff(a, b, closed).max(directed_hausdorff(b, a, closed))
}
