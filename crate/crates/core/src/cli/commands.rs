use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::table::{float_json, Table};
use super::{Failure, Format, RunSpec, EXIT_VERIFICATION, TOL_ENV};
use crate::analysis::{count_singular, measure_closure_with, singular_points, ClosureOptions};
use crate::closedform::{Branch, OrbitEquation};
use crate::dynamics::{
    angular_potential, hamiltonian, integrate, state_from_constants, xk_value, IntegratorConfig,
    Sign,
};
use crate::error::{Error, Result};
use crate::k1::{
    boundary_curve_a, classify_region, constants_cartesian_to_polar, dashed_locus_a, polar_cos_c,
    RegionBounds,
};
use crate::presets::{figure, Figure, OrbitPreset, RegionPreset, FIGURE_IDS};
use crate::types::{check_boundedness, Conserved, PhaseState, SystemParams, Trajectory, Verdict};

const DEFAULT_TRACE_SAMPLES: usize = 2000;
const DEFAULT_ORBIT_SAMPLES: usize = 721;
const DEFAULT_GRID: usize = 201;
const DEFAULT_PSI0: f64 = 0.3;

fn params_json(p: &SystemParams) -> Value {
    json!({
        "omega": float_json(p.omega),
        "alpha": float_json(p.alpha),
        "beta": float_json(p.beta),
        "k": p.k.to_string(),
    })
}

fn meta(command: &str, params: &SystemParams, constants: Value) -> Value {
    json!({
        "tool": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "command": command,
        "params": params_json(params),
        "constants": constants,
    })
}

fn opt_json(v: Option<f64>) -> Value {
    v.map_or(Value::Null, float_json)
}

fn write_json<W: Write>(mut w: W, doc: &Value) -> Result<()> {
    serde_json::to_writer(&mut w, doc).map_err(|e| Error::Io(e.to_string()))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn write_table_to<W: Write>(w: W, format: Format, table: &Table, meta: Value) -> Result<()> {
    match format {
        Format::Csv => table.write_csv(w),
        Format::Json => write_json(w, &table.to_json(meta)),
    }
}

fn emit(path: Option<&Path>, format: Format, table: &Table, meta: Value) -> Result<()> {
    match path {
        Some(p) => write_table_to(BufWriter::new(File::create(p)?), format, table, meta),
        None => write_table_to(std::io::stdout().lock(), format, table, meta),
    }
}

fn emit_value(path: Option<&Path>, doc: &Value) -> Result<()> {
    match path {
        Some(p) => write_json(BufWriter::new(File::create(p)?), doc),
        None => write_json(std::io::stdout().lock(), doc),
    }
}

/// Angle in sector 0 where the barrier potential is smallest.
fn barrier_minimum(params: &SystemParams) -> f64 {
    let k = params.k();
    if params.alpha > 0.0 && params.beta > 0.0 {
        (params.beta / params.alpha).powf(0.25).atan() / k
    } else {
        std::f64::consts::PI / (4.0 * k)
    }
}

/// Start of a trace. Bounded constants with `C` use the orbit's phase
/// parametrisation; otherwise momenta come from `E`, `A`, `phi0`, `r0`.
fn initial_state(spec: &RunSpec) -> Result<PhaseState> {
    let (params, energy, a) = (spec.params, spec.energy()?, spec.a()?);
    let report = check_boundedness(&params, energy, a);
    if report.verdict == Verdict::Bounded {
        if let (Some(c), None, None) = (spec.c, spec.phi0, spec.r0) {
            let eq = OrbitEquation::new(params, energy, a, c, Branch::Plus)?;
            return eq.phase_state(spec.psi0.unwrap_or(DEFAULT_PSI0), 0, 0.0);
        }
        let phi0 = spec.phi0.unwrap_or_else(|| {
            let z = 0.5 * (report.z_min + report.z_max);
            z.sqrt().asin() / params.k()
        });
        return state_from_constants(&params, energy, a, phi0, spec.r0, (Sign::Plus, Sign::Plus));
    }
    let violated = || {
        report
            .violations
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    };
    let phi0 = spec.phi0.unwrap_or_else(|| barrier_minimum(&params));
    let om2 = params.omega * params.omega;
    let r0 = match spec.r0 {
        Some(r) => r,
        None if params.omega > 0.0 => (energy / (2.0 * om2)).sqrt(),
        None if energy > 0.0 && a > 0.0 => (2.0 * a / energy).sqrt(),
        None => {
            return Err(Error::NotBounded(format!(
                "no default start radius; violated: {}",
                violated()
            )))
        }
    };
    let (w, _) = angular_potential(phi0, &params)?;
    let ang = a - w;
    let rad = energy - a / (r0 * r0) - om2 * r0 * r0;
    let tol = 1e-12 * energy.abs().max(a.abs()).max(1.0);
    if ang < -tol || rad < -tol || !(r0 > 0.0) {
        return Err(Error::NotBounded(format!(
            "no real momenta at r0 = {r0}, phi0 = {phi0} (verdict {:?}); violated: {}",
            report.verdict,
            violated()
        )));
    }
    Ok(PhaseState::new(
        0.0,
        r0,
        phi0,
        rad.max(0.0).sqrt(),
        ang.max(0.0).sqrt(),
    ))
}

fn sampled_config(t_end: f64, samples: usize) -> IntegratorConfig {
    IntegratorConfig::sampled(t_end / samples as f64)
}

fn trace_table(traj: &Trajectory) -> Table {
    let s = &traj.samples;
    let col = |f: &dyn Fn(&PhaseState) -> f64| s.iter().map(f).collect::<Vec<_>>();
    Table::new()
        .float("t", col(&|p| p.t))
        .float("r", col(&|p| p.r))
        .float("phi", col(&|p| p.phi))
        .float("x", col(&|p| p.r * p.phi.cos()))
        .float("y", col(&|p| p.r * p.phi.sin()))
        .float("p_r", col(&|p| p.p_r))
        .float("p_phi", col(&|p| p.p_phi))
        .float("H", traj.conserved.iter().map(|c| c.h).collect())
        .float("X", traj.conserved.iter().map(|c| c.x).collect())
}

pub(super) fn trace(spec: &RunSpec) -> std::result::Result<(), Failure> {
    let s0 = initial_state(spec)?;
    let t_end = spec.t_end.unwrap_or(if spec.params.omega > 0.0 {
        10.0 * spec.params.radial_period()
    } else {
        10.0
    });
    let samples = spec.samples.unwrap_or(DEFAULT_TRACE_SAMPLES);
    let traj = integrate(&s0, &spec.params, t_end, &sampled_config(t_end, samples))?;
    let constants = json!({
        "energy": float_json(spec.energy()?),
        "A": float_json(spec.a()?),
        "C": opt_json(spec.c),
        "t_end": float_json(t_end),
        "samples": samples,
    });
    emit(
        spec.out.as_deref(),
        spec.format,
        &trace_table(&traj),
        meta("trace", &spec.params, constants),
    )?;
    Ok(())
}

fn sector_count(params: &SystemParams) -> i64 {
    (4 * params.k.numer()).div_ceil(params.k.denom()) as i64
}

fn orbit_table(
    eq: &OrbitEquation,
    sectors: &[i64],
    root: Option<usize>,
    n: usize,
) -> Result<(Table, f64)> {
    let (mut phi, mut r, mut x, mut y) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let (mut idx, mut branch, mut sector) = (Vec::new(), Vec::new(), Vec::new());
    let mut defect = 0.0f64;
    for &s in sectors {
        let curve = eq.sample_orbit(root, n, s)?;
        defect = defect.max(curve.closure_defect);
        for p in &curve.points {
            let (px, py) = p.xy();
            phi.push(p.phi);
            r.push(p.r);
            x.push(px);
            y.push(py);
            idx.push(p.root_index as i64);
            branch.push(p.branch.to_string());
            sector.push(s);
        }
    }
    let table = Table::new()
        .float("phi", phi)
        .float("r", r)
        .float("x", x)
        .float("y", y)
        .int("root_index", idx)
        .text("branch", branch)
        .int("sector", sector);
    Ok((table, defect))
}

fn orbit_constants(eq: &OrbitEquation, root: Option<usize>, sectors: &[i64], defect: f64) -> Value {
    json!({
        "energy": float_json(eq.constants.energy),
        "A": float_json(eq.constants.a),
        "C": float_json(eq.constants.c),
        "root": root,
        "sectors": sectors,
        "closure_defect": float_json(defect),
    })
}

pub(super) fn orbit(spec: &RunSpec) -> std::result::Result<(), Failure> {
    let eq = OrbitEquation::new(
        spec.params,
        spec.energy()?,
        spec.a()?,
        spec.c()?,
        Branch::Plus,
    )?;
    let sectors: Vec<i64> = if spec.all_sectors {
        (0..sector_count(&spec.params)).collect()
    } else {
        spec.sectors.clone().unwrap_or_else(|| vec![0])
    };
    let n = spec.samples.unwrap_or(DEFAULT_ORBIT_SAMPLES);
    let (table, defect) = orbit_table(&eq, &sectors, spec.root, n)?;
    let m = meta(
        "orbit",
        &spec.params,
        orbit_constants(&eq, spec.root, &sectors, defect),
    );
    emit(spec.out.as_deref(), spec.format, &table, m)?;
    Ok(())
}

pub(super) fn singular(spec: &RunSpec) -> std::result::Result<(), Failure> {
    let eq = OrbitEquation::new(
        spec.params,
        spec.energy()?,
        spec.a()?,
        spec.c()?,
        Branch::Plus,
    )?;
    let pts = singular_points(&eq);
    let table = Table::new()
        .float("r_star", pts.iter().map(|p| p.r_star).collect())
        .float("u", pts.iter().map(|p| p.u).collect())
        .float("r", pts.iter().map(|p| p.r).collect())
        .float("phi", pts.iter().map(|p| p.phi).collect())
        .int(
            "on_trajectory",
            pts.iter().map(|p| i64::from(p.on_trajectory)).collect(),
        )
        .float("residual", pts.iter().map(|p| p.residual).collect());
    let constants = json!({
        "energy": float_json(eq.constants.energy),
        "A": float_json(eq.constants.a),
        "C": float_json(eq.constants.c),
        "n_singular": count_singular(&pts),
    });
    emit(
        spec.out.as_deref(),
        spec.format,
        &table,
        meta("singular", &spec.params, constants),
    )?;
    Ok(())
}

/// Verification tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    /// Relative drift of `H` and `X`.
    pub conservation: f64,
    /// Relative error of the full-state period.
    pub period: f64,
    pub closure: f64,
    pub residual: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            conservation: 1e-9,
            period: 1e-6,
            closure: 1e-6,
            residual: 1e-6,
        }
    }
}

impl Thresholds {
    /// Defaults, or every tolerance set to the value of `TTW_DEFAULT_TOL`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_ENV) {
            Ok(s) => Self::from_override(Some(&s)),
            Err(std::env::VarError::NotPresent) => Ok(Self::default()),
            Err(e) => Err(Error::Parse(format!("{TOL_ENV}: {e}"))),
        }
    }

    pub fn from_override(value: Option<&str>) -> Result<Self> {
        let Some(s) = value else {
            return Ok(Self::default());
        };
        let tol: f64 = s
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("{TOL_ENV} = '{s}': {e}")))?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "{TOL_ENV} = {tol} must be positive"
            )));
        }
        Ok(Self {
            conservation: tol,
            period: tol,
            closure: tol,
            residual: tol,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub samples: usize,
    pub span: f64,
    pub drift_h: f64,
    pub drift_x: f64,
    pub radial_period: f64,
    pub radial_period_estimate: f64,
    /// Full-state period, `n` radial periods for `k = m/n`.
    pub expected_period: f64,
    pub period_estimate: f64,
    pub closure_offset: f64,
    pub closure_gap: f64,
    pub k_period_angle: f64,
    pub fitted_c: f64,
    pub branch: Branch,
    pub max_orbit_residual: f64,
    pub n_singular: usize,
    pub thresholds: Thresholds,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Runs every check on a bounded trajectory. The full state is compared
/// after `n` radial periods for `k = m/n`.
pub fn verify_trajectory(traj: &Trajectory, thresholds: &Thresholds) -> Result<VerifyReport> {
    let params = traj.params;
    let (m, n) = (params.k.numer(), params.k.denom());
    let expected = n as f64 * params.radial_period();
    let (drift_h, drift_x) = traj.max_relative_drift();
    let closure = measure_closure_with(
        traj,
        &ClosureOptions {
            offset: Some(expected),
            ..ClosureOptions::default()
        },
    )?;
    let eq = OrbitEquation::from_state(traj.initial(), params)?;
    let mut residual = 0.0f64;
    for s in &traj.samples {
        residual = residual.max(eq.orbit_residual(s.r, s.phi)?.abs());
    }
    let n_singular = count_singular(&singular_points(&eq));
    let period_error = ((closure.period_estimate - expected) / expected).abs();
    let checks = vec![
        Check::below("conservation_H", drift_h, thresholds.conservation),
        Check::below("conservation_X", drift_x, thresholds.conservation),
        Check::below(
            "period",
            if period_error.is_nan() {
                f64::INFINITY
            } else {
                period_error
            },
            thresholds.period,
        ),
        Check::below("closure", closure.closure_gap, thresholds.closure),
        Check::below("orbit_residual", residual, thresholds.residual),
        Check::below(
            "singular_count",
            n_singular as f64,
            m.saturating_sub(1) as f64,
        ),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        samples: traj.samples.len(),
        span: traj.span(),
        drift_h,
        drift_x,
        radial_period: closure.radial_period,
        radial_period_estimate: closure.radial_period_estimate,
        expected_period: expected,
        period_estimate: closure.period_estimate,
        closure_offset: closure.closure_offset,
        closure_gap: closure.closure_gap,
        k_period_angle: closure.k_period_angle,
        fitted_c: eq.constants.c,
        branch: eq.branch,
        max_orbit_residual: residual,
        n_singular,
        thresholds: *thresholds,
        checks,
        pass,
    })
}

/// Rebuilds a trajectory from the columns `t, r, phi, p_r, p_phi`.
pub(super) fn trajectory_from_table(table: &Table, params: SystemParams) -> Result<Trajectory> {
    let (t, r, phi) = (table.floats("t")?, table.floats("r")?, table.floats("phi")?);
    let (pr, pphi) = (table.floats("p_r")?, table.floats("p_phi")?);
    let samples: Vec<PhaseState> = (0..table.rows())
        .map(|i| PhaseState::new(t[i], r[i], phi[i], pr[i], pphi[i]))
        .collect();
    if samples.len() < 2 {
        return Err(Error::Parse("trace needs at least two rows".into()));
    }
    let conserved = samples
        .iter()
        .map(|s| {
            Ok(Conserved {
                h: hamiltonian(s, &params)?,
                x: xk_value(s, &params)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        params,
        samples,
        conserved,
    })
}

fn read_trace(path: &Path, params: SystemParams) -> Result<Trajectory> {
    let table = if path.extension().is_some_and(|e| e == "json") {
        let doc: Value =
            serde_json::from_reader(File::open(path)?).map_err(|e| Error::Parse(e.to_string()))?;
        Table::from_json(&doc)?.0
    } else {
        Table::read_csv(File::open(path)?)?
    };
    trajectory_from_table(&table, params)
}

pub(super) fn verify(spec: &RunSpec) -> std::result::Result<(), Failure> {
    let thresholds = Thresholds::from_env()?;
    let traj = match &spec.input {
        Some(path) => read_trace(path, spec.params)?,
        None => {
            let s0 = initial_state(spec)?;
            if check_boundedness(&spec.params, spec.energy()?, spec.a()?).verdict
                != Verdict::Bounded
            {
                return Err(
                    Error::NotBounded("verification needs bounded constants".into()).into(),
                );
            }
            let n = spec.params.k.denom() as f64;
            let t_end = spec
                .t_end
                .unwrap_or(10.0f64.max(n + 2.0) * spec.params.radial_period());
            let samples = spec.samples.unwrap_or(DEFAULT_TRACE_SAMPLES);
            integrate(&s0, &spec.params, t_end, &sampled_config(t_end, samples))?
        }
    };
    let report = verify_trajectory(&traj, &thresholds)?;
    let doc = json!({
        "report": serde_json::to_value(&report).map_err(|e| Error::Io(e.to_string()))?,
        "meta": meta("verify", &spec.params, json!({
            "energy": opt_json(spec.energy),
            "A": opt_json(spec.a),
            "C": opt_json(spec.c),
        })),
    });
    emit_value(spec.out.as_deref(), &doc)?;
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} ({:e} > {:e})", c.name, c.value, c.threshold))
            .collect();
        Err(Failure {
            code: EXIT_VERIFICATION,
            message: format!("verification failed: {}", failed.join(", ")),
        })
    }
}

fn require_k1(params: &SystemParams) -> Result<()> {
    if params.k.is_integer() && params.k.numer() == 1 && params.omega > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "the constants map needs k = 1 and omega > 0, got k = {}, omega = {}",
            params.k, params.omega
        )))
    }
}

fn region_table(params: &SystemParams, energy: f64, n: usize) -> (Table, Table) {
    let b = RegionBounds::new(params, energy);
    let n = n.max(2);
    let at = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let (mut e1s, mut as_, mut cos_c, mut region) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for i in 0..n {
        let e1 = at(b.e1_min, b.e1_max, i);
        for j in 0..n {
            let a = at(b.a_min, b.a_max, j);
            e1s.push(e1);
            as_.push(a);
            cos_c.push(polar_cos_c(e1, a, params, energy));
            region.push(classify_region(e1, a, params, energy).to_string());
        }
    }
    let grid = Table::new()
        .float("e1", e1s)
        .float("a", as_)
        .float("cos_c", cos_c)
        .text("region", region);
    let (mut le1, mut la, mut lname) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..(4 * n) {
        let e1 = b.e1_min + (b.e1_max - b.e1_min) * i as f64 / (4 * n - 1) as f64;
        for a in boundary_curve_a(e1, params, energy) {
            le1.push(e1);
            la.push(a);
            lname.push("curve".to_string());
        }
        if let Some(a) = dashed_locus_a(e1, params, energy) {
            le1.push(e1);
            la.push(a);
            lname.push("dashed".to_string());
        }
    }
    let loci = Table::new()
        .float("e1", le1)
        .float("a", la)
        .text("locus", lname);
    (grid, loci)
}

fn bounds_json(params: &SystemParams, energy: f64) -> Value {
    let b = RegionBounds::new(params, energy);
    json!({
        "energy": float_json(energy),
        "e1_min": float_json(b.e1_min),
        "e1_max": float_json(b.e1_max),
        "a_min": float_json(b.a_min),
        "a_max": float_json(b.a_max),
    })
}

pub(super) fn k1map(spec: &RunSpec) -> std::result::Result<(), Failure> {
    require_k1(&spec.params)?;
    if let Some(cc) = spec.cartesian {
        let map = constants_cartesian_to_polar(&cc, &spec.params)?;
        let table = Table::new()
            .float("e1", vec![cc.e1])
            .float("e2", vec![cc.e2])
            .float("s", vec![cc.s])
            .float("a", vec![map.a])
            .float("cos_c", vec![map.cos_c])
            .float("c", vec![map.c().unwrap_or(f64::NAN)])
            .text("region", vec![map.region.to_string()]);
        let constants = json!({ "energy": float_json(cc.energy()) });
        emit(
            spec.out.as_deref(),
            spec.format,
            &table,
            meta("k1map", &spec.params, constants),
        )?;
        return Ok(());
    }
    let energy = spec.energy()?;
    let (grid, _) = region_table(&spec.params, energy, spec.samples.unwrap_or(DEFAULT_GRID));
    let m = meta("k1map", &spec.params, bounds_json(&spec.params, energy));
    emit(spec.out.as_deref(), spec.format, &grid, m)?;
    Ok(())
}

fn write_region_figure(p: &RegionPreset, dir: &Path, spec: &RunSpec) -> Result<Vec<PathBuf>> {
    let ext = spec.format.extension();
    let (grid, loci) = region_table(&p.params, p.energy, spec.samples.unwrap_or(DEFAULT_GRID));
    let m = meta("figures", &p.params, bounds_json(&p.params, p.energy));
    let grid_path = dir.join(format!("{}.{ext}", p.id));
    let loci_path = dir.join(format!("{}_loci.{ext}", p.id));
    let meta_path = dir.join(format!("{}.meta.json", p.id));
    emit(Some(&grid_path), spec.format, &grid, m.clone())?;
    emit(Some(&loci_path), spec.format, &loci, m.clone())?;
    let mut side = m;
    side["preset"] = serde_json::to_value(p).map_err(|e| Error::Io(e.to_string()))?;
    emit_value(Some(&meta_path), &side)?;
    Ok(vec![grid_path, loci_path, meta_path])
}

fn write_orbit_figure(p: &OrbitPreset, dir: &Path, spec: &RunSpec) -> Result<Vec<PathBuf>> {
    let ext = spec.format.extension();
    let eq = p.equation()?;
    let n = spec.samples.unwrap_or(DEFAULT_ORBIT_SAMPLES);
    let (table, defect) = orbit_table(&eq, &p.sectors, p.root, n)?;
    let m = meta(
        "figures",
        &p.params,
        orbit_constants(&eq, p.root, &p.sectors, defect),
    );
    let data_path = dir.join(format!("{}.{ext}", p.id));
    let meta_path = dir.join(format!("{}.meta.json", p.id));
    emit(Some(&data_path), spec.format, &table, m.clone())?;
    let mut side = m;
    side["preset"] = serde_json::to_value(p).map_err(|e| Error::Io(e.to_string()))?;
    emit_value(Some(&meta_path), &side)?;
    Ok(vec![data_path, meta_path])
}

pub(super) fn figures(spec: &RunSpec) -> std::result::Result<(), Failure> {
    let dir = spec.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(Error::from)?;
    let ids: Vec<String> = match &spec.preset {
        Some(id) => vec![id.clone()],
        None => FIGURE_IDS.iter().map(|s| s.to_string()).collect(),
    };
    for id in ids {
        let written = match figure(&id)? {
            Figure::RegionMap(p) => write_region_figure(&p, &dir, spec)?,
            Figure::Orbit(p) => write_orbit_figure(&p, &dir, spec)?,
        };
        for path in written {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::orbit_preset;

    #[test]
    fn tolerance_override() {
        assert_eq!(
            Thresholds::from_override(None).unwrap(),
            Thresholds::default()
        );
        let t = Thresholds::from_override(Some(" 1e-3 ")).unwrap();
        assert_eq!(
            (t.conservation, t.period, t.closure, t.residual),
            (1e-3, 1e-3, 1e-3, 1e-3)
        );
        assert!(Thresholds::from_override(Some("abc")).is_err());
        assert!(Thresholds::from_override(Some("-1")).is_err());
    }

    #[test]
    fn sector_counts_cover_the_full_turn() {
        for (id, want) in [
            ("fig4", 4),
            ("fig8", 8),
            ("fig10", 12),
            ("fig12", 2),
            ("fig13", 2),
            ("fig14", 6),
        ] {
            assert_eq!(
                sector_count(&orbit_preset(id).unwrap().params),
                want,
                "{id}"
            );
        }
    }

    #[test]
    fn region_grid_matches_classifier() {
        let p = crate::presets::figure("fig1").unwrap();
        let Figure::RegionMap(p) = p else { panic!() };
        let (grid, loci) = region_table(&p.params, p.energy, 11);
        assert_eq!(grid.rows(), 121);
        assert!(loci.rows() > 0);
        let e1 = grid.floats("e1").unwrap();
        let a = grid.floats("a").unwrap();
        assert!(e1
            .iter()
            .all(|&v| v >= 4.0 * 3f64.sqrt() - 1e-12 && v <= 20.0 - 4.0 * 2f64.sqrt() + 1e-12));
        assert!(a.iter().all(|&v| v <= 25.0 + 1e-12));
    }
}
