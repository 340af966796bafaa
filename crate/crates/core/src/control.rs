//! Stepsize selection for a target absolute tolerance.
//!
//! A pilot ladder gives `M_4` and `M_5`; their difference estimates the
//! leading error coefficient `K̃_4` of `M_4` at every node, and then
//!
//! ```text
//! h* = (ε / max|K̃_4|)^(1/4),   n = ⌈(x_end - x0) / h*⌉,   h = (x_end - x0) / n
//! ```

use crate::ivp::Problem;
use crate::richardson::{error_coefficient, extrapolate, ExtrapolationTable, Ladder};
use crate::{Error, Result};

/// Pilot stepsize used when none is given.
pub const DEFAULT_PILOT: f64 = 0.01;
/// Order of the extrapolation whose error is being controlled.
pub const CONTROLLED_ORDER: usize = 4;
/// Tolerances below this are accepted but cannot be guaranteed.
pub const ROUNDING_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct StepsizePlan {
    pub epsilon: f64,
    /// `max_i |K̃_4(x_i)|`.
    pub k4max: f64,
    pub h_star: f64,
    pub n: usize,
    pub h: f64,
    /// The error estimate vanished, so any stepsize will do; `n = 1`.
    pub unconstrained: bool,
    /// `ε` is below what double precision can deliver reliably.
    pub rounding_limited: bool,
}

pub fn plan_stepsize(epsilon: f64, k4: &[f64], x0: f64, x_end: f64) -> Result<StepsizePlan> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {epsilon}"
        )));
    }
    if k4.is_empty() {
        return Err(Error::invalid("no error coefficients to plan from"));
    }
    if !(x_end > x0) {
        return Err(Error::invalid("stepsize planning needs x_end > x0"));
    }
    let k4max = k4.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    if !k4max.is_finite() {
        return Err(Error::invalid("error coefficients are not finite"));
    }
    let len = x_end - x0;
    let rounding_limited = epsilon < ROUNDING_FLOOR;
    if k4max == 0.0 {
        return Ok(StepsizePlan {
            epsilon,
            k4max,
            h_star: f64::INFINITY,
            n: 1,
            h: len,
            unconstrained: true,
            rounding_limited,
        });
    }
    let h_star = (epsilon / k4max).powf(0.25);
    let n = ((len / h_star).ceil() as usize).max(1);
    Ok(StepsizePlan {
        epsilon,
        k4max,
        h_star,
        n,
        h: len / n as f64,
        unconstrained: false,
        rounding_limited,
    })
}

/// Coarse step count closest to a requested stepsize (at least 1).
pub fn steps_for(x0: f64, x_end: f64, h: f64) -> usize {
    (((x_end - x0) / h).round() as usize).max(1)
}

/// `K̃_4` at every coarse node of a pilot ladder with stepsize near `h_pilot`.
pub fn estimate_k4(p: &Problem, h_pilot: f64) -> Result<Vec<f64>> {
    if !(h_pilot > 0.0) || !h_pilot.is_finite() {
        return Err(Error::invalid(format!(
            "pilot stepsize must be positive, got {h_pilot}"
        )));
    }
    if !(p.x_end > p.x0) {
        return Err(Error::invalid("stepsize control needs x_end > x0"));
    }
    let n = steps_for(p.x0, p.x_end, h_pilot);
    let ladder = Ladder::run(p, n, CONTROLLED_ORDER + 1)?;
    let (m4, m5) = (
        ladder.table(CONTROLLED_ORDER)?,
        ladder.table(CONTROLLED_ORDER + 1)?,
    );
    let mut k4 = error_coefficient(&m4, &m5)?;
    suppress_rounding_noise(&mut k4, &m4, &m5);
    Ok(k4)
}

/// Zeroes `K̃_m` wherever `M_m` and `M_{m+1}` agree to within the rounding
/// Euler can accumulate: up to one rounding per step of the finest run.
pub fn suppress_rounding_noise(
    k: &mut [f64],
    table_m: &ExtrapolationTable,
    table_m1: &ExtrapolationTable,
) {
    let finest = table_m1.runs.last().map_or(0, |r| r.steps());
    let noise = f64::EPSILON * finest as f64;
    for (k, (a, b)) in k.iter_mut().zip(table_m.ms.iter().zip(&table_m1.ms)) {
        if (a - b).abs() <= noise * a.abs().max(b.abs()) {
            *k = 0.0;
        }
    }
}

/// Pilot run, plan, and the final order-4 solve at the planned stepsize.
pub fn tune_and_solve(
    p: &Problem,
    epsilon: f64,
    h_pilot: f64,
) -> Result<(StepsizePlan, ExtrapolationTable)> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {epsilon}"
        )));
    }
    let k4 = estimate_k4(p, h_pilot)?;
    let plan = plan_stepsize(epsilon, &k4, p.x0, p.x_end)?;
    if plan.rounding_limited {
        log::warn!("tolerance {epsilon:e} is below {ROUNDING_FLOOR:e}; result is rounding-limited");
    }
    let table = extrapolate(p, plan.n, CONTROLLED_ORDER)?;
    Ok((plan, table))
}
