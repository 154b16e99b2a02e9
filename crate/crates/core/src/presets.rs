//! Named parameter sets `fig1` .. `fig14`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::closedform::{Branch, OrbitEquation};
use crate::error::{Error, Result};
use crate::types::{Rational, SystemParams};

/// One closed orbit drawn in some sectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitPreset {
    pub id: String,
    pub params: SystemParams,
    pub energy: f64,
    pub a: f64,
    pub c: f64,
    pub sectors: Vec<i64>,
    /// Root drawn, counted in ascending `r`; all roots when `None`.
    pub root: Option<usize>,
}

impl OrbitPreset {
    pub fn equation(&self) -> Result<OrbitEquation> {
        OrbitEquation::new(self.params, self.energy, self.a, self.c, Branch::Plus)
    }
}

/// The `(E₁, A)` region map of the `k = 1` case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPreset {
    pub id: String,
    pub params: SystemParams,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Figure {
    RegionMap(RegionPreset),
    Orbit(OrbitPreset),
}

pub const FIGURE_IDS: [&str; 14] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11",
    "fig12", "fig13", "fig14",
];

fn params(omega: f64, alpha: f64, beta: f64, m: u32, n: u32) -> SystemParams {
    SystemParams::new(omega, alpha, beta, Rational::new(m, n).expect("nonzero"))
        .expect("preset parameters are valid")
}

#[allow(clippy::too_many_arguments)]
fn orbit(
    id: &str,
    p: SystemParams,
    energy: f64,
    a: f64,
    c: f64,
    sectors: std::ops::Range<i64>,
    root: Option<usize>,
) -> Figure {
    Figure::Orbit(OrbitPreset {
        id: id.to_string(),
        params: p,
        energy,
        a,
        c,
        sectors: sectors.collect(),
        root,
    })
}

pub fn figure(id: &str) -> Result<Figure> {
    let k1 = params(2.0, 3.0, 2.0, 1, 1);
    let half = PI / 2.0;
    Ok(match id {
        "fig1" => Figure::RegionMap(RegionPreset {
            id: id.into(),
            params: k1,
            energy: 20.0,
        }),
        "fig2" => orbit(id, k1, 20.0, 12.0, PI, 0..1, None),
        "fig3" => orbit(id, k1, 20.0, 12.0, 0.95 * PI, 0..1, None),
        "fig4" => orbit(id, k1, 20.0, 12.0, half, 0..1, None),
        "fig5" => orbit(id, k1, 20.0, 12.0, PI / 20.0, 0..1, None),
        "fig6" => orbit(id, k1, 20.0, 12.0, 0.0, 0..1, None),
        "fig7" => orbit(id, k1, 20.0, 12.0, half, 0..4, None),
        "fig8" => orbit(
            id,
            params(2.0, 3.0, 2.0, 2, 1),
            50.0,
            60.0,
            half,
            0..8,
            Some(0),
        ),
        "fig9" => orbit(
            id,
            params(2.0, 3.0, 2.0, 2, 1),
            50.0,
            60.0,
            half,
            0..8,
            Some(1),
        ),
        "fig10" => orbit(
            id,
            params(2.0, 3.0, 2.0, 3, 1),
            50.0,
            100.0,
            half,
            0..12,
            None,
        ),
        "fig11" => orbit(
            id,
            params(2.0, 0.25, 0.125, 4, 1),
            16.0,
            15.0,
            half,
            0..4,
            Some(0),
        ),
        "fig12" => orbit(
            id,
            params(2.0, 3.0, 2.0, 1, 2),
            20.0,
            24.0,
            half,
            0..2,
            None,
        ),
        "fig13" => orbit(
            id,
            params(2.0, 3.0, 2.0, 1, 3),
            20.0,
            24.0,
            half,
            0..1,
            None,
        ),
        "fig14" => orbit(
            id,
            params(2.0, 0.25, 0.125, 3, 2),
            15.0,
            10.0,
            half,
            0..6,
            None,
        ),
        other => return Err(Error::UnknownPreset(other.to_string())),
    })
}

pub fn orbit_preset(id: &str) -> Result<OrbitPreset> {
    match figure(id)? {
        Figure::Orbit(p) => Ok(p),
        Figure::RegionMap(_) => Err(Error::UnknownPreset(format!("{id} is not an orbit figure"))),
    }
}

/// One orbit for each of the seven values of `k`, in the order
/// `1, 2, 3, 4, 1/2, 1/3, 3/2`.
pub fn parameter_sets() -> Vec<OrbitPreset> {
    ["fig4", "fig8", "fig10", "fig11", "fig12", "fig13", "fig14"]
        .iter()
        .map(|id| orbit_preset(id).expect("known preset"))
        .collect()
}
