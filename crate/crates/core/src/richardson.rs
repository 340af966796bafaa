//! Richardson extrapolation over a ladder of Euler runs.
//!
//! Run `k` of a ladder uses stepsize `h/2^k`. Euler's error at a fixed node
//! is a power series in the stepsize, so the combination
//! `M_m = Σ_{k<m} α_k N_k` with
//!
//! ```text
//! Σ_k α_k (2^-k)^j = 1 if j == 0 else 0,    j = 0..m-1
//! ```
//!
//! cancels the first `m - 1` error terms and is accurate to `O(h^m)`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::ivp::{euler_solve, Problem, SecondOrderSystem, Trajectory};
use crate::{Error, Result};

pub const MIN_ORDER: usize = 2;
/// Beyond this the moment system is too ill-conditioned to trust.
pub const MAX_ORDER: usize = 8;

const ALIGN_TOL: f64 = 1e-12;

/// Extrapolation weights `α_0..α_{m-1}` for order `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub m: usize,
    pub alphas: Vec<f64>,
}

impl CoefficientVector {
    /// `Σ_k α_k (2^-k)^j`.
    pub fn moment(&self, j: usize) -> f64 {
        self.alphas
            .iter()
            .enumerate()
            .map(|(k, a)| a * 0.5f64.powi((k * j) as i32))
            .sum()
    }
}

fn check_order(m: usize, min: usize) -> Result<()> {
    if (min..=MAX_ORDER).contains(&m) {
        Ok(())
    } else {
        Err(Error::OrderOutOfRange {
            what: "extrapolation",
            order: m,
            min,
            max: MAX_ORDER,
        })
    }
}

/// Solves `A x = b` in place by Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty column");
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (x, &p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Weights for order `m`, solved from the moment system with
/// `A[i][j] = (1/2^i)^j` and right-hand side `e_1`.
pub fn coefficients(m: usize) -> Result<CoefficientVector> {
    check_order(m, MIN_ORDER)?;
    Ok(solve_moments(m))
}

fn solve_moments(m: usize) -> CoefficientVector {
    let a: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| 0.5f64.powi((i * j) as i32)).collect())
        .collect();
    let mut rhs = vec![0.0; m];
    rhs[0] = 1.0;
    CoefficientVector {
        m,
        alphas: solve_dense(a, rhs),
    }
}

/// Like [`coefficients`] but also accepts `m = 1`, the raw Euler run.
fn weights(m: usize) -> Result<CoefficientVector> {
    check_order(m, 1)?;
    Ok(if m == 1 {
        CoefficientVector {
            m,
            alphas: vec![1.0],
        }
    } else {
        solve_moments(m)
    })
}

/// `c_m = Σ_k α_k (2^-k)^m`, so that the leading error coefficient of `M_m`
/// is `c_m · K_m` where `K_m` is the `h^m` coefficient of plain Euler.
///
/// `c_1 = 1`, `c_2 = -1/2`, `c_4 = -1/64`.
pub fn conversion_factor(m: usize) -> Result<f64> {
    Ok(weights(m)?.moment(m))
}

/// `levels` Euler runs at step counts `n·2^k`, `k = 0..levels`.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub n: usize,
    pub runs: Vec<Arc<Trajectory>>,
}

impl Ladder {
    pub fn run<S: SecondOrderSystem + ?Sized>(sys: &S, n: usize, levels: usize) -> Result<Self> {
        check_order(levels, 1)?;
        if n == 0 {
            let (x0, x_end) = sys.interval();
            if x0 != x_end {
                return Err(Error::invalid("coarse step count must be at least 1"));
            }
        }
        let runs = (0..levels)
            .into_par_iter()
            .map(|k| euler_solve(sys, n << k).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ladder { n, runs })
    }

    pub fn levels(&self) -> usize {
        self.runs.len()
    }

    /// Combines the first `m` runs into `M_m` at the coarse nodes.
    pub fn table(&self, m: usize) -> Result<ExtrapolationTable> {
        let w = weights(m)?;
        if m > self.runs.len() {
            return Err(Error::invalid(format!(
                "order {m} needs {m} ladder runs, have {}",
                self.runs.len()
            )));
        }
        let coarse = &self.runs[0];
        let n = self.n;
        for (k, run) in self.runs[..m].iter().enumerate() {
            let stride = 1usize << k;
            if run.len() != n * stride + 1 {
                return Err(Error::GridMismatch(format!(
                    "run {k} has {} nodes, expected {}",
                    run.len(),
                    n * stride + 1
                )));
            }
            for i in 0..=n {
                let (a, b) = (coarse.xs[i], run.xs[i * stride]);
                if (a - b).abs() > ALIGN_TOL * a.abs().max(1.0) {
                    return Err(Error::GridMismatch(format!(
                        "run {k} node {} at {b} does not align with coarse node {a}",
                        i * stride
                    )));
                }
            }
        }
        let combine = |pick: fn(&Trajectory) -> &[f64], i: usize| -> f64 {
            self.runs[..m]
                .iter()
                .zip(&w.alphas)
                .enumerate()
                .map(|(k, (run, a))| a * pick(run)[i << k])
                .sum()
        };
        let ms = (0..=n).map(|i| combine(|r| &r.cs, i)).collect();
        let zs = (0..=n).map(|i| combine(|r| &r.zs, i)).collect();
        Ok(ExtrapolationTable {
            order: m,
            h: coarse.h,
            xs: coarse.xs.clone(),
            ms,
            zs,
            runs: self.runs[..m].to_vec(),
            experimental: false,
        })
    }
}

/// Order-`m` extrapolated values on the coarse grid of a ladder.
#[derive(Debug, Clone)]
pub struct ExtrapolationTable {
    pub order: usize,
    /// Coarse stepsize.
    pub h: f64,
    pub xs: Vec<f64>,
    /// `M_m(x_i)`: the combined `C` values.
    pub ms: Vec<f64>,
    /// `Z` combined with the same weights.
    pub zs: Vec<f64>,
    pub runs: Vec<Arc<Trajectory>>,
    /// Set for systems whose formulation is not fully validated (general
    /// outer limits).
    pub experimental: bool,
}

impl ExtrapolationTable {
    pub fn steps(&self) -> usize {
        self.xs.len().saturating_sub(1)
    }

    /// `(x_end, M_m(x_end))`.
    pub fn last(&self) -> (f64, f64) {
        let i = self.xs.len() - 1;
        (self.xs[i], self.ms[i])
    }
}

/// Euler runs at `n·2^k` steps for `k < m`, combined to order `m`.
pub fn extrapolate(p: &Problem, n: usize, m: usize) -> Result<ExtrapolationTable> {
    extrapolate_system(p, n, m)
}

pub fn extrapolate_system<S: SecondOrderSystem + ?Sized>(
    sys: &S,
    n: usize,
    m: usize,
) -> Result<ExtrapolationTable> {
    weights(m)?;
    Ladder::run(sys, n, m)?.table(m)
}

/// `K̃_m(x_i) = (M_m(x_i) - M_{m+1}(x_i)) / h^m` at every coarse node.
pub fn error_coefficient(
    table_m: &ExtrapolationTable,
    table_m1: &ExtrapolationTable,
) -> Result<Vec<f64>> {
    if table_m1.order != table_m.order + 1 {
        return Err(Error::GridMismatch(format!(
            "orders {} and {} are not consecutive",
            table_m.order, table_m1.order
        )));
    }
    if table_m.h != table_m1.h || table_m.xs.len() != table_m1.xs.len() {
        return Err(Error::GridMismatch(
            "tables use different coarse grids".into(),
        ));
    }
    if table_m
        .xs
        .iter()
        .zip(&table_m1.xs)
        .any(|(a, b)| (a - b).abs() > ALIGN_TOL * a.abs().max(1.0))
    {
        return Err(Error::GridMismatch("coarse nodes differ".into()));
    }
    if table_m.h == 0.0 {
        return Err(Error::invalid(
            "error coefficient needs a positive stepsize",
        ));
    }
    let scale = table_m.h.powi(table_m.order as i32);
    Ok(table_m
        .ms
        .iter()
        .zip(&table_m1.ms)
        .map(|(a, b)| (a - b) / scale)
        .collect())
}
