//! Selection size, expected encoding success and retrieval cost as functions
//! of the mismatch tolerance.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, Discrete, DiscreteCDF};

use crate::error::{Error, Result};

/// Noise level `2^-7.5` behind the asymptotic step count.
pub const ASYMPTOTIC_NOISE: f64 = 0.005_524_271_728_019_903;

/// Above this tolerance the selection would exceed the number of distinct
/// eigenstates at `n = 4`.
pub const MAX_TOLERANCE: f64 = 0.474;

fn check_tolerance(epsilon: f64) -> Result<()> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::Domain(format!("tolerance {epsilon} outside [0, 1/2)")));
    }
    Ok(())
}

/// Selection-size factor as the series
/// `1 - (1-e)/ln 2 * sum_i e^i/i - e log2(1/e)`, truncated once a term falls
/// below `1e-15` of the running sum.
pub fn g(epsilon: f64) -> Result<f64> {
    check_tolerance(epsilon)?;
    if epsilon == 0.0 {
        return Ok(1.0);
    }
    let mut sum = 0.0;
    let mut power = 1.0;
    for i in 1.. {
        power *= epsilon;
        let term = power / i as f64;
        sum += term;
        if term < 1e-15 * sum {
            break;
        }
    }
    Ok(1.0 - (1.0 - epsilon) / std::f64::consts::LN_2 * sum - epsilon * (1.0 / epsilon).log2())
}

/// `1 - H2(e)`, the closed form of [`g`].
pub fn g_entropy(epsilon: f64) -> Result<f64> {
    check_tolerance(epsilon)?;
    if epsilon == 0.0 {
        return Ok(1.0);
    }
    let q = 1.0 - epsilon;
    Ok(1.0 + epsilon * epsilon.log2() + q * q.log2())
}

/// Selection size `(3/2)^n / g(e)`.
pub fn selection_size(n: usize, epsilon: f64) -> Result<f64> {
    Ok(1.5f64.powi(n as i32) / g(epsilon)?)
}

/// Fraction of full-weight observables inside any one context,
/// `(2^(n-1) + 1) / 3^n`.
pub fn context_fraction(n: usize) -> f64 {
    (2f64.powi(n as i32 - 1) + 1.0) / 3f64.powi(n as i32)
}

/// Treatment of an even split among the well-defined states.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    /// An even split is a failed encoding.
    #[default]
    Failure,
    /// An even split succeeds half the time.
    HalfCredit,
}

/// Success probability for `k` well-defined states, each matching with
/// probability `p`. No well-defined state leaves a coin flip.
pub fn majority_success(k: u64, p: f64, tie: TieRule) -> f64 {
    if k == 0 {
        return 0.5;
    }
    let dist = Binomial::new(p, k).expect("probability in [0, 1]");
    let mut s = dist.sf(k / 2);
    if k.is_multiple_of(2) && tie == TieRule::HalfCredit {
        s += dist.pmf(k / 2) / 2.0;
    }
    s
}

/// Expected encoding quality at `(n, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessEstimate {
    pub n: usize,
    pub epsilon: f64,
    pub n_states: f64,
    /// Mean number of well-defined states per observable.
    pub mean_well_defined: f64,
    /// Per-parity success.
    pub f_e: f64,
    /// Per-bit success, `f_e^2 + (1 - f_e)^2`.
    pub f_bar: f64,
}

/// Averages [`majority_success`] over `N_O ~ B(round(N_s), P_O)`.
pub fn expected_success(n: usize, epsilon: f64, tie: TieRule) -> Result<SuccessEstimate> {
    let n_states = selection_size(n, epsilon)?;
    let trials = n_states.round().max(1.0);
    let p_o = context_fraction(n);
    let match_p = 1.0 - epsilon;
    // Binomial weights by recurrence; the mean is below one, so the tail
    // past a few dozen terms is negligible.
    let ratio = p_o / (1.0 - p_o);
    let mut weight = (trials * (-p_o).ln_1p()).exp();
    let mut f_e = 0.0;
    let mut mass = 0.0;
    let mut k = 0u64;
    while (k as f64) <= trials {
        f_e += weight * majority_success(k, match_p, tie);
        mass += weight;
        if 1.0 - mass < 1e-16 || (k > 8 && weight < 1e-18) {
            break;
        }
        weight *= (trials - k as f64) / (k as f64 + 1.0) * ratio;
        k += 1;
    }
    Ok(SuccessEstimate {
        n,
        epsilon,
        n_states,
        mean_well_defined: p_o * n_states,
        f_e,
        f_bar: f_e * f_e + (1.0 - f_e) * (1.0 - f_e),
    })
}

/// Steps and samples for one observable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RetrievalCost {
    pub n_states: f64,
    pub n_well_defined: f64,
    /// Unrounded `log2(N_s - N_O) - log2(nu) + 1`.
    pub steps: f64,
    /// `3 (N_s - N_O) + T N_O`.
    pub samples: f64,
}

/// Retrieval cost for `N_s(n, e)` with `n_well_defined` definite states at
/// noise `nu`.
pub fn retrieval_cost(n: usize, epsilon: f64, n_well_defined: f64, nu: f64) -> Result<RetrievalCost> {
    if !(nu > 0.0) {
        return Err(Error::Domain(format!("noise {nu} must be positive")));
    }
    let n_states = selection_size(n, epsilon)?;
    let unbiased = n_states - n_well_defined;
    if unbiased <= 0.0 {
        return Err(Error::Domain(format!(
            "no unbiased states to filter (N_s = {n_states}, N_O = {n_well_defined})"
        )));
    }
    let steps = unbiased.log2() - nu.log2() + 1.0;
    Ok(RetrievalCost {
        n_states,
        n_well_defined,
        steps,
        samples: 3.0 * unbiased + steps * n_well_defined,
    })
}

/// Asymptotic cost with one well-defined state and noise `2^-7.5`.
pub fn asymptotic_cost(n: usize, epsilon: f64) -> Result<RetrievalCost> {
    retrieval_cost(n, epsilon, 1.0, ASYMPTOTIC_NOISE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_matches_entropy() {
        for i in 0..50 {
            let e = i as f64 * 0.0099;
            assert!((g(e).unwrap() - g_entropy(e).unwrap()).abs() < 1e-12, "{e}");
        }
        assert!(g(0.5).is_err());
        assert!(g(-0.1).is_err());
    }

    #[test]
    fn zero_tolerance_size() {
        assert_eq!(g(0.0).unwrap(), 1.0);
        assert!((selection_size(8, 0.0).unwrap() - 1.5f64.powi(8)).abs() < 1e-9);
    }

    #[test]
    fn majority_success_cases() {
        assert_eq!(majority_success(0, 0.9, TieRule::Failure), 0.5);
        assert!((majority_success(1, 0.9, TieRule::Failure) - 0.9).abs() < 1e-12);
        assert!((majority_success(2, 0.9, TieRule::Failure) - 0.81).abs() < 1e-12);
        assert!((majority_success(2, 0.9, TieRule::HalfCredit) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn closed_form_cost() {
        let c = asymptotic_cost(16, 0.048).unwrap();
        let closed = 16.0 * 1.5f64.log2() + 9.0;
        assert!((c.steps - closed).abs() / closed < 0.01);
        let samples = 4.155 * 1.5f64.powi(16) + 16.0 * 1.5f64.log2() + 6.0;
        assert!((c.samples - samples).abs() / samples < 0.01);
    }
}
