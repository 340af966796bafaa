//! The subcommands, as functions from parsed inputs to rendered output so
//! they can be driven from tests without spawning a process.

use std::fmt::Write as _;

use dblint_core::control::{estimate_k4, steps_for, suppress_rounding_noise, CONTROLLED_ORDER};
use dblint_core::genlimits::general_solve;
use dblint_core::richardson::Ladder;
use dblint_core::{
    coefficients, conversion_factor, corrected_problem, error_coefficient, extrapolate,
    plan_stepsize, simpson_rule, tune_and_solve, ExtrapolationTable, StepsizePlan,
};

use crate::format::{rational, round_trip, significant};
use crate::problem_file::{Mode, ProblemFile};
use crate::CliError;

/// Tolerances swept by `tune --table`.
pub const TABLE_TOLERANCES: [f64; 6] = [1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4];
/// Orders of the K̃ curves written by `kcurves`.
pub const KCURVE_ORDERS: usize = 5;

/// Output of a command: an optional CSV document and a human-readable report.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Rendered {
    pub csv: Option<String>,
    pub report: String,
}

/// How the coarse grid is requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Steps {
    Count(usize),
    Size(f64),
}

impl Steps {
    /// Exactly one of `steps`/`h` from the flags, falling back to the file.
    pub fn choose(
        steps: Option<usize>,
        h: Option<f64>,
        pf: &ProblemFile,
    ) -> Result<Steps, CliError> {
        match (steps, h) {
            (Some(_), Some(_)) => Err(CliError::Usage("give only one of --steps and --h".into())),
            (Some(n), None) => Ok(Steps::Count(n)),
            (None, Some(h)) => Ok(Steps::Size(h)),
            (None, None) => match (pf.n, pf.h) {
                (Some(_), Some(_)) => {
                    Err(CliError::Usage("problem file sets both `n` and `h`".into()))
                }
                (Some(n), None) => Ok(Steps::Count(n)),
                (None, Some(h)) => Ok(Steps::Size(h)),
                (None, None) => Err(CliError::Usage("one of --steps or --h is required".into())),
            },
        }
    }

    /// Coarse step count on `[x0, x_end]`.
    pub fn resolve(self, x0: f64, x_end: f64) -> Result<usize, CliError> {
        let len = x_end - x0;
        match self {
            Steps::Count(0) if len > 0.0 => {
                Err(CliError::Usage("--steps must be at least 1".into()))
            }
            Steps::Count(n) => Ok(n),
            Steps::Size(h) if !(h > 0.0) || !h.is_finite() => {
                Err(CliError::Usage(format!("--h must be positive, got {h}")))
            }
            Steps::Size(_) if len == 0.0 => Ok(0),
            Steps::Size(h) => {
                let n = steps_for(x0, x_end, h);
                let actual = len / n as f64;
                if ((actual - h) / h).abs() > 1e-3 {
                    log::warn!("stepsize adjusted from {h} to {actual} to fit {n} steps");
                }
                Ok(n)
            }
        }
    }
}

fn order_or_default(order: Option<usize>, pf: &ProblemFile) -> usize {
    order.or(pf.order).unwrap_or(CONTROLLED_ORDER)
}

fn end_label(x_end: f64) -> String {
    format!("C({x_end})")
}

pub fn solve(
    pf: &ProblemFile,
    order: Option<usize>,
    steps: Steps,
    quad_order: usize,
) -> Result<Rendered, CliError> {
    let m = order_or_default(order, pf);
    let n = steps.resolve(pf.x0, pf.x_end)?;
    let table = match pf.mode {
        Mode::Plain => extrapolate(&pf.problem(quad_order)?, n, m)?,
        Mode::General => general_solve(&pf.general_problem(quad_order)?, n, m)?,
    };
    let mut csv = String::new();
    if table.experimental {
        csv.push_str("# experimental: general outer limits\n");
    }
    csv.push_str("x,C,Z\n");
    for i in 0..table.xs.len() {
        let _ = writeln!(
            csv,
            "{},{},{}",
            round_trip(table.xs[i]),
            round_trip(table.ms[i]),
            round_trip(table.zs[i])
        );
    }
    let (x_end, c) = table.last();
    Ok(Rendered {
        csv: Some(csv),
        report: format!("{} = {}\n", end_label(x_end), significant(c, 15)),
    })
}

fn plan_report(plan: &StepsizePlan) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "epsilon = {:e}", plan.epsilon);
    let _ = writeln!(s, "k4max = {}", round_trip(plan.k4max));
    let _ = writeln!(s, "h_star = {}", round_trip(plan.h_star));
    let _ = writeln!(s, "n = {}", plan.n);
    let _ = writeln!(s, "h = {}", round_trip(plan.h));
    if plan.unconstrained {
        s.push_str("note: error estimate vanished; stepsize unconstrained\n");
    }
    if plan.rounding_limited {
        s.push_str("note: tolerance is below double-precision reach; rounding-limited\n");
    }
    s
}

pub fn tune(
    pf: &ProblemFile,
    tolerance: Option<f64>,
    pilot: f64,
    quad_order: usize,
) -> Result<(StepsizePlan, ExtrapolationTable, Rendered), CliError> {
    let eps = tolerance
        .or(pf.tolerance)
        .ok_or_else(|| CliError::Usage("--tolerance is required".into()))?;
    if !(eps > 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {eps}"
        )));
    }
    if !(pilot > 0.0) {
        return Err(CliError::Usage(format!(
            "pilot stepsize must be positive, got {pilot}"
        )));
    }
    let p = pf.problem(quad_order)?;
    let (plan, table) = tune_and_solve(&p, eps, pilot)?;
    let (x_end, c) = table.last();
    let mut report = plan_report(&plan);
    let _ = writeln!(report, "{} = {}", end_label(x_end), significant(c, 15));
    Ok((plan, table, Rendered { csv: None, report }))
}

/// Plans for every tolerance in [`TABLE_TOLERANCES`] from one pilot run.
pub fn tune_table(
    pf: &ProblemFile,
    pilot: f64,
    quad_order: usize,
) -> Result<(Vec<StepsizePlan>, Rendered), CliError> {
    if !(pilot > 0.0) {
        return Err(CliError::Usage(format!(
            "pilot stepsize must be positive, got {pilot}"
        )));
    }
    let p = pf.problem(quad_order)?;
    let k4 = estimate_k4(&p, pilot)?;
    let plans = TABLE_TOLERANCES
        .iter()
        .map(|&eps| plan_stepsize(eps, &k4, p.x0, p.x_end))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("epsilon,k4max,h_star,n,h,h_2sig\n");
    for plan in &plans {
        let _ = writeln!(
            csv,
            "{:e},{},{},{},{},{}",
            plan.epsilon,
            round_trip(plan.k4max),
            round_trip(plan.h_star),
            plan.n,
            round_trip(plan.h),
            significant(plan.h, 2)
        );
    }
    Ok((
        plans,
        Rendered {
            csv: Some(csv),
            report: String::new(),
        },
    ))
}

pub fn correct(
    pf: &ProblemFile,
    rule: &str,
    order: Option<usize>,
    steps: Steps,
    quad_order: usize,
) -> Result<Rendered, CliError> {
    if rule != "simpson" {
        return Err(CliError::Usage(format!(
            "unknown rule `{rule}` (available: simpson)"
        )));
    }
    if pf.mode == Mode::General {
        return Err(CliError::Usage(
            "correction mode needs a plain problem".into(),
        ));
    }
    let m = order_or_default(order, pf);
    let p = pf.problem(quad_order)?;
    let n = steps.resolve(p.x0, p.x_end)?;
    let q = simpson_rule(&p);
    let table = extrapolate(&corrected_problem(&p, q.clone())?, n, m)?;
    let mut csv = String::from("x,Q,C,Q_plus_C\n");
    let mut last = 0.0;
    for (&x, &c) in table.xs.iter().zip(&table.ms) {
        let qv = q.eval(x)?.v;
        last = qv + c;
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            round_trip(x),
            round_trip(qv),
            round_trip(c),
            round_trip(last)
        );
    }
    let x_end = table.last().0;
    Ok(Rendered {
        csv: Some(csv),
        report: format!("Q({x_end}) + C({x_end}) = {}\n", significant(last, 15)),
    })
}

pub fn coeffs(order: usize) -> Result<Rendered, CliError> {
    let c = coefficients(order)?;
    let parts: Vec<String> = c
        .alphas
        .iter()
        .map(|&a| rational(a, 65536, 1e-12))
        .collect();
    Ok(Rendered {
        csv: None,
        report: format!("{}\n", parts.join(" ")),
    })
}

pub fn kcurves(pf: &ProblemFile, steps: Steps, quad_order: usize) -> Result<Rendered, CliError> {
    let p = pf.problem(quad_order)?;
    let n = steps.resolve(p.x0, p.x_end)?;
    if n == 0 {
        return Err(CliError::Usage("kcurves needs x_end > x0".into()));
    }
    let ladder = Ladder::run(&p, n, KCURVE_ORDERS + 1)?;
    let tables = (1..=KCURVE_ORDERS + 1)
        .map(|m| ladder.table(m))
        .collect::<Result<Vec<_>, _>>()?;
    let curves = tables
        .windows(2)
        .map(|w| {
            let mut k = error_coefficient(&w[0], &w[1])?;
            suppress_rounding_noise(&mut k, &w[0], &w[1]);
            Ok(k)
        })
        .collect::<Result<Vec<_>, dblint_core::Error>>()?;

    let mut csv = String::from(
        "# K~j = (M_j - M_{j+1}) / h^j, 0 where the two agree to rounding; K~j = c_j * K_j with",
    );
    for j in 1..=KCURVE_ORDERS {
        let _ = write!(csv, " c{j}={}", round_trip(conversion_factor(j)?));
    }
    csv.push('\n');
    csv.push_str("x,K1t,K2t,K3t,K4t,K5t\n");
    for (i, &x) in tables[0].xs.iter().enumerate() {
        csv.push_str(&round_trip(x));
        for curve in &curves {
            csv.push(',');
            csv.push_str(&round_trip(curve[i]));
        }
        csv.push('\n');
    }
    Ok(Rendered {
        csv: Some(csv),
        report: format!("h = {}\n", round_trip(tables[0].h)),
    })
}
