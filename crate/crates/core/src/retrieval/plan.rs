//! Number of filtering steps and the resulting sample budget.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Filtering schedule for one observable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RetrievalPlan {
    /// Measurement steps `T`.
    pub steps: u32,
    /// Selection size `N_s`.
    pub n_states: f64,
    /// States with a definite outcome on the observable, `N_O`.
    pub n_well_defined: f64,
    /// Expected unbiased survivors, `(N_s - N_O) / 2^(T-1)`.
    pub nu: f64,
    /// Expected states measured, `3 (N_s - N_O) + T N_O`.
    pub expected_samples: f64,
    /// Hard upper bound `T N_s`.
    pub sample_bound: f64,
    /// The requested noise needed no filtering (`T = 1`).
    pub degenerate: bool,
}

impl RetrievalPlan {
    pub fn with_steps(n_states: f64, n_well_defined: f64, steps: u32) -> Result<Self> {
        check(n_states, n_well_defined)?;
        if steps == 0 {
            return Err(Error::Domain("at least one step is required".into()));
        }
        let unbiased = n_states - n_well_defined;
        Ok(RetrievalPlan {
            steps,
            n_states,
            n_well_defined,
            nu: unbiased / 2f64.powi(steps as i32 - 1),
            expected_samples: 3.0 * unbiased + steps as f64 * n_well_defined,
            sample_bound: steps as f64 * n_states,
            degenerate: false,
        })
    }

    /// Picks the `T` whose noise is closest to `nu_target`.
    pub fn for_noise(n_states: f64, n_well_defined: f64, nu_target: f64) -> Result<Self> {
        let (exact, degenerate) = exact_steps(n_states, n_well_defined, nu_target)?;
        if degenerate {
            return degenerate_plan(n_states, n_well_defined);
        }
        let lo = exact.floor().max(1.0) as u32;
        let pick = [lo, lo + 1]
            .into_iter()
            .map(|t| RetrievalPlan::with_steps(n_states, n_well_defined, t))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min_by(|a, b| (a.nu - nu_target).abs().total_cmp(&(b.nu - nu_target).abs()))
            .expect("two candidates");
        Ok(pick)
    }

    /// Smallest `T` with noise at most `nu_target`,
    /// `ceil(log2(N_s - N_O) - log2(nu) + 1)`.
    pub fn bounded_noise(n_states: f64, n_well_defined: f64, nu_target: f64) -> Result<Self> {
        let (exact, degenerate) = exact_steps(n_states, n_well_defined, nu_target)?;
        if degenerate {
            return degenerate_plan(n_states, n_well_defined);
        }
        RetrievalPlan::with_steps(n_states, n_well_defined, exact.ceil().max(1.0) as u32)
    }
}

fn check(n_states: f64, n_well_defined: f64) -> Result<()> {
    if !(n_states > 0.0) || !(0.0..=n_states).contains(&n_well_defined) {
        return Err(Error::Domain(format!(
            "need 0 <= N_O <= N_s and N_s > 0 (got N_s = {n_states}, N_O = {n_well_defined})"
        )));
    }
    Ok(())
}

fn exact_steps(n_states: f64, n_well_defined: f64, nu: f64) -> Result<(f64, bool)> {
    check(n_states, n_well_defined)?;
    if !(nu > 0.0) {
        return Err(Error::Domain(format!("noise target must be positive (got {nu})")));
    }
    let unbiased = n_states - n_well_defined;
    if nu >= unbiased {
        return Ok((1.0, true));
    }
    Ok((unbiased.log2() - nu.log2() + 1.0, false))
}

fn degenerate_plan(n_states: f64, n_well_defined: f64) -> Result<RetrievalPlan> {
    let mut plan = RetrievalPlan::with_steps(n_states, n_well_defined, 1)?;
    plan.degenerate = true;
    Ok(plan)
}

/// Noise target `(1 - f_e) / 10`. A perfect encoding has no error to
/// compare with, so it uses one observable's worth, `1 / (10 * total)`.
pub fn noise_target(f_e: f64, total_observables: usize) -> f64 {
    let miss = 1.0 - f_e;
    if miss > 1e-12 {
        miss / 10.0
    } else {
        1.0 / (10.0 * total_observables as f64)
    }
}

/// Plans for a list of `(N_s, f_e)` results at `n` qubits, with
/// `N_O = N_s (2^(n-1) + 1) / 3^n`. A perfect row reuses the previous row's
/// `T`, since it has no encoding error to balance against.
pub fn plans_for_results(n: usize, rows: &[(usize, f64)]) -> Result<Vec<RetrievalPlan>> {
    let total = crate::pauli::word_count(n)? as f64;
    let fraction = (2f64.powi(n as i32 - 1) + 1.0) / total;
    let mut out: Vec<RetrievalPlan> = Vec::with_capacity(rows.len());
    for &(ns, fe) in rows {
        let ns = ns as f64;
        let n_o = ns * fraction;
        let plan = match out.last() {
            Some(prev) if fe >= 1.0 - 1e-12 => RetrievalPlan::with_steps(ns, n_o, prev.steps)?,
            _ => RetrievalPlan::for_noise(ns, n_o, noise_target(fe, total as usize))?,
        };
        out.push(plan);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let rows = [(9, 75.0 / 81.0), (11, 76.0 / 81.0), (12, 78.0 / 81.0), (13, 80.0 / 81.0), (14, 1.0)];
        let plans = plans_for_results(4, &rows).unwrap();
        let steps: Vec<u32> = plans.iter().map(|p| p.steps).collect();
        assert_eq!(steps, vec![11, 12, 13, 14, 14]);
        let nu: Vec<String> = plans.iter().map(|p| format!("{:.4}", p.nu)).collect();
        assert_eq!(nu, vec!["0.0078", "0.0048", "0.0026", "0.0014", "0.0015"]);
        let s: Vec<i64> = plans.iter().map(|p| p.expected_samples.round() as i64).collect();
        assert_eq!(s, vec![35, 44, 49, 55, 59]);
    }

    #[test]
    fn one_more_step_halves_noise() {
        let a = RetrievalPlan::with_steps(14.0, 14.0 / 9.0, 10).unwrap();
        let b = RetrievalPlan::with_steps(14.0, 14.0 / 9.0, 11).unwrap();
        assert!((a.nu / b.nu - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bounded_never_exceeds_target() {
        for ns in 9..40 {
            for k in 1..12 {
                let target = 2f64.powi(-k);
                let p = RetrievalPlan::bounded_noise(ns as f64, ns as f64 / 9.0, target).unwrap();
                assert!(p.nu <= target * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn degenerate_and_errors() {
        assert!(RetrievalPlan::for_noise(9.0, 1.0, 10.0).unwrap().degenerate);
        assert!(RetrievalPlan::for_noise(9.0, 10.0, 0.1).is_err());
        assert!(RetrievalPlan::for_noise(9.0, 1.0, 0.0).is_err());
        assert!(RetrievalPlan::with_steps(9.0, 1.0, 0).is_err());
    }
}
