//! Tolerance minimizing the total sampling cost at fixed amplified success.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::amplify::repetitions_normal;
use super::tolerance::{asymptotic_cost, expected_success, TieRule};

/// Grid spacing of the coarse scan.
pub const GRID_STEP: f64 = 0.001;
const GRID_MAX: f64 = 0.3;

/// Minimum of `r(e) * S(n, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceOptimum {
    pub n: usize,
    pub target: f64,
    pub epsilon: f64,
    pub objective: f64,
    pub f_bar: f64,
    /// Tolerances whose objective is within 0.1% of the minimum.
    pub flat_low: f64,
    pub flat_high: f64,
}

/// Total samples `r * S` for fixed amplified success `target`. The
/// repetition count is the real-valued normal approximation, which keeps the
/// objective smooth; the integer count steps by two and creates spurious
/// minima.
pub fn sampling_objective(n: usize, epsilon: f64, target: f64, tie: TieRule) -> Result<f64> {
    let est = expected_success(n, epsilon, tie)?;
    if est.f_bar <= 0.5 {
        return Ok(f64::INFINITY);
    }
    let cost = asymptotic_cost(n, epsilon)?;
    Ok(repetitions_normal(target, est.f_bar) * cost.samples)
}

/// Grid scan over `(0, 0.3]` followed by golden-section refinement inside
/// the bracketing grid cells.
pub fn epsilon_star(n: usize, target: f64, tie: TieRule) -> Result<ToleranceOptimum> {
    if !(target > 0.5 && target < 1.0) {
        return Err(Error::Domain(format!("target {target} outside (1/2, 1)")));
    }
    let points = (GRID_MAX / GRID_STEP).round() as usize;
    let grid: Vec<(f64, f64)> = (1..=points)
        .into_par_iter()
        .map(|i| {
            let e = i as f64 * GRID_STEP;
            sampling_objective(n, e, target, tie).map(|v| (e, v))
        })
        .collect::<Result<_>>()?;
    let best = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .expect("nonempty grid");
    let lo = grid[best.saturating_sub(1)].0;
    let hi = grid[(best + 1).min(grid.len() - 1)].0;
    let f = |e: f64| sampling_objective(n, e, target, tie);
    let (mut a, mut b) = (lo, hi);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-7 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    let mut epsilon = (a + b) / 2.0;
    let mut objective = f(epsilon)?;
    if grid[best].1 < objective {
        epsilon = grid[best].0;
        objective = grid[best].1;
    }
    let flat: Vec<f64> = grid
        .iter()
        .filter(|&&(_, v)| v <= objective * 1.001)
        .map(|&(e, _)| e)
        .collect();
    Ok(ToleranceOptimum {
        n,
        target,
        epsilon,
        objective,
        f_bar: expected_success(n, epsilon, tie)?.f_bar,
        flat_low: flat.iter().copied().fold(epsilon, f64::min),
        flat_high: flat.iter().copied().fold(epsilon, f64::max),
    })
}
