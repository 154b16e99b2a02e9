//! Chebyshev polynomials of the first kind on `[−1, 1]`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const DOMAIN_SLACK: f64 = 1e-12;
/// Roots of `T_m(R) = c` closer than this are merged.
const ROOT_MERGE: f64 = 1e-10;

fn check_domain(x: f64) -> Result<f64> {
    if x.abs() > 1.0 + DOMAIN_SLACK || x.is_nan() {
        Err(Error::DomainError { x })
    } else {
        Ok(x.clamp(-1.0, 1.0))
    }
}

/// `T_degree(x)` by the three-term recurrence `T_{j+1} = 2x T_j − T_{j−1}`.
pub fn chebyshev_t(degree: u32, x: f64) -> Result<f64> {
    let x = check_domain(x)?;
    Ok(t_unchecked(degree, x))
}

pub(crate) fn t_unchecked(degree: u32, x: f64) -> f64 {
    match degree {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 1..degree {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `dT_degree/dx = degree · U_{degree−1}(x)`.
pub fn chebyshev_t_derivative(degree: u32, x: f64) -> Result<f64> {
    let x = check_domain(x)?;
    if degree == 0 {
        return Ok(0.0);
    }
    // U_0 = 1, U_1 = 2x
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if degree == 1 {
        return Ok(1.0);
    }
    for _ in 2..degree {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(degree as f64 * cur)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `T_degree(x)` from the real-coefficient double sum
/// `Σ_l C(k, 2l) Σ_j (−1)^j C(l, j) x^{k−2j}`, i.e. the expansion of
/// `Σ_l C(k, 2l) x^{k−2l} (x² − 1)^l`.
pub fn chebyshev_t_binomial(degree: u32, x: f64) -> f64 {
    let half = degree / 2;
    let mut total = 0.0;
    for l in 0..=half {
        let outer = binomial(degree, 2 * l);
        let mut inner = 0.0;
        for j in 0..=l {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            inner += sign * binomial(l, j) * x.powi((degree - 2 * j) as i32);
        }
        total += outer * inner;
    }
    total
}

/// All real solutions of `T_m(R) = c` in `[−1, 1]`, ascending:
/// `R = cos((arccos c + 2πj)/m)` for `j = 0..m`.
pub fn solve_chebyshev(m: u32, c: f64) -> Result<Vec<f64>> {
    let c = check_domain(c)?;
    if m == 0 {
        return Err(Error::InvalidParams("degree must be positive".into()));
    }
    let theta = c.acos();
    let mut roots: Vec<f64> = (0..m)
        .map(|j| ((theta + 2.0 * PI * j as f64) / m as f64).cos())
        .collect();
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() < ROOT_MERGE);
    Ok(roots)
}

/// Zeros `cos(jπ/m)`, `j = 1..m`, of `dT_m/dR`, ascending.
pub fn critical_points(m: u32) -> Vec<f64> {
    let mut pts: Vec<f64> = (1..m).map(|j| (j as f64 * PI / m as f64).cos()).collect();
    pts.sort_by(|a, b| a.total_cmp(b));
    pts
}
