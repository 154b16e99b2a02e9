//! Adaptive Dormand-Prince 8(5,3) driver.

use super::tableau::{A, B, E3, E5, STAGES};
use super::{confining_sector, rhs, IntegratorConfig};
use crate::error::{Error, Result};
use crate::types::{sector_of, PhaseState, SystemParams};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;
/// Steps shorter than this fraction of the natural time scale abort.
const MIN_STEP_FRACTION: f64 = 1e-14;

type State = [f64; 4];

fn rms(v: &State) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() / 4.0).sqrt()
}

struct Stepper<'a> {
    params: &'a SystemParams,
    rtol: f64,
    atol: f64,
}

struct Step {
    y: State,
    f: State,
    err: f64,
}

impl Stepper<'_> {
    fn scale(&self, y: &State, y_new: &State) -> State {
        let mut s = [0.0; 4];
        for i in 0..4 {
            s[i] = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
        }
        s
    }

    fn step(&self, y: &State, f0: &State, h: f64) -> Result<Step> {
        let mut k = [[0.0; 4]; STAGES + 1];
        k[0] = *f0;
        for s in 1..STAGES {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..4 {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = rhs(self.params, &ys)?;
        }
        let mut y_new = *y;
        for (s, ks) in k.iter().enumerate().take(STAGES) {
            if B[s] != 0.0 {
                for i in 0..4 {
                    y_new[i] += h * B[s] * ks[i];
                }
            }
        }
        let f_new = rhs(self.params, &y_new)?;
        k[STAGES] = f_new;

        let scale = self.scale(y, &y_new);
        let (mut e5, mut e3) = (0.0, 0.0);
        for i in 0..4 {
            let (mut a5, mut a3) = (0.0, 0.0);
            for (s, ks) in k.iter().enumerate() {
                a5 += E5[s] * ks[i];
                a3 += E3[s] * ks[i];
            }
            e5 += (a5 / scale[i]).powi(2);
            e3 += (a3 / scale[i]).powi(2);
        }
        let err = if e5 == 0.0 && e3 == 0.0 {
            0.0
        } else {
            h.abs() * e5 / ((e5 + 0.01 * e3) * 4.0).sqrt()
        };
        Ok(Step {
            y: y_new,
            f: f_new,
            err,
        })
    }

    fn initial_step(&self, y0: &State, f0: &State, span: f64, max_step: f64) -> Result<f64> {
        let scale = self.scale(y0, y0);
        let ratio = |v: &State| {
            let mut out = [0.0; 4];
            for i in 0..4 {
                out[i] = v[i] / scale[i];
            }
            rms(&out)
        };
        let d0 = ratio(y0);
        let d1 = ratio(f0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        }
        .min(span);
        let mut y1 = *y0;
        for i in 0..4 {
            y1[i] += h0 * f0[i];
        }
        let f1 = rhs(self.params, &y1)?;
        let mut diff = [0.0; 4];
        for i in 0..4 {
            diff[i] = f1[i] - f0[i];
        }
        let d2 = ratio(&diff) / h0;
        let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(1.0 / 8.0)
        };
        Ok((100.0 * h0).min(h1).min(max_step).min(span))
    }
}

/// Runs the adaptive integrator from `initial` to `t_end`. When `record` is
/// false only the initial and final states are returned.
pub(super) fn run(
    initial: &PhaseState,
    params: &SystemParams,
    t_end: f64,
    config: &IntegratorConfig,
    record: bool,
) -> Result<Vec<PhaseState>> {
    let stepper = Stepper {
        params,
        rtol: config.rel_tol,
        atol: config.abs_tol,
    };
    let sector = confining_sector(initial, params)?;
    let span = t_end - initial.t;
    let time_scale = if params.omega > 0.0 {
        params.radial_period().min(span)
    } else {
        span
    };
    let min_step = MIN_STEP_FRACTION * time_scale;

    let mut t = initial.t;
    let mut y = initial.to_array();
    let mut f = rhs(params, &y)?;
    let mut h = stepper.initial_step(&y, &f, span, config.max_step)?;
    let mut samples = vec![*initial];

    let output_dt = if record { config.output_step } else { None };
    let mut next_output = 1usize;
    let output_time = |i: usize| match output_dt {
        Some(dt) => (initial.t + i as f64 * dt).min(t_end),
        None => t_end,
    };

    let mut rejected = false;
    while t < t_end {
        let target = output_time(next_output);
        let mut h_try = h.min(config.max_step);
        let mut clipped = false;
        if t + h_try >= target {
            h_try = target - t;
            clipped = true;
        }
        if h_try < min_step && target - t >= min_step {
            return Err(Error::StepFailure {
                t,
                reason: format!("step {h_try:e} below {min_step:e}"),
            });
        }

        let outcome = stepper.step(&y, &f, h_try);
        let accepted = match outcome {
            Ok(step) if step.err <= 1.0 => Some(step),
            Ok(step) => {
                let factor = (SAFETY * step.err.powf(ERROR_EXPONENT)).max(MIN_FACTOR);
                h = h_try * factor;
                rejected = true;
                None
            }
            // A stage landed on a barrier wall: shrink and retry.
            Err(_) => {
                h = h_try * 0.25;
                rejected = true;
                None
            }
        };
        let Some(step) = accepted else {
            if h < min_step {
                return Err(Error::StepFailure {
                    t,
                    reason: format!("step size collapsed to {h:e} near a barrier"),
                });
            }
            continue;
        };

        let factor = if step.err == 0.0 {
            MAX_FACTOR
        } else {
            (SAFETY * step.err.powf(ERROR_EXPONENT)).min(MAX_FACTOR)
        };
        let grow = if rejected { factor.min(1.0) } else { factor };
        rejected = false;
        // Keep the controller's proposal when the step was only clipped.
        h = if clipped {
            h.max(h_try * grow)
        } else {
            h_try * grow
        };

        t = if clipped { target } else { t + h_try };
        y = step.y;
        f = step.f;

        if !(y[0] > 0.0) || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::StepFailure {
                t,
                reason: format!("state left the physical domain: {y:?}"),
            });
        }
        if let Some(s) = sector {
            match sector_of(y[1], params.k) {
                Ok(n) if n == s => {}
                _ => return Err(Error::SectorWall { phi: y[1] }),
            }
        }

        let on_grid = clipped && output_dt.is_some();
        if on_grid {
            next_output += 1;
        }
        if (record && (config.dense_output || on_grid)) || t >= t_end {
            samples.push(PhaseState::from_array(t, y));
        }
    }
    Ok(samples)
}
