//! Compression ratio of the amplified code at large register sizes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::amplify::{amplify, repetitions_for};
use super::tolerance::{asymptotic_cost, expected_success, TieRule};

/// Full accounting of one register size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerformanceReport {
    pub n: usize,
    pub epsilon: f64,
    pub n_states: f64,
    /// Unrounded steps.
    pub steps: f64,
    pub steps_rounded: u64,
    pub samples: f64,
    pub repetitions: u64,
    /// `r n N_s T` with unrounded `T`.
    pub resources: f64,
    /// `(3^n - 1) / 2` in decimal.
    pub data_bits: String,
    pub ratio: f64,
    pub ratio_rounded_steps: f64,
    /// Natural log of `ratio`, computed without big numbers.
    pub log_ratio: f64,
    pub f_e: f64,
    pub f_bar: f64,
    pub amplified: f64,
}

/// Exact `(3^n - 1) / 2`.
pub fn data_bits_exact(n: usize) -> BigInt {
    (num_traits::pow(BigInt::from(3), n) - 1) / 2
}

/// `factor * (3/2)^n / ((3^n - 1) / 2)`, evaluated as an exact rational
/// apart from the float `factor`.
fn scaled_ratio(n: usize, factor: f64) -> Result<f64> {
    let factor = BigRational::from_float(factor)
        .ok_or_else(|| Error::Domain(format!("non-finite factor {factor}")))?;
    let three_n = num_traits::pow(BigInt::from(3), n);
    let size = BigRational::new(three_n.clone(), num_traits::pow(BigInt::from(2), n));
    let m = BigRational::new(three_n - 1, BigInt::from(2));
    if m.numer() <= &BigInt::from(0) {
        return Err(Error::Domain("register too small".into()));
    }
    let exact = factor * size / m;
    exact
        .to_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Domain("ratio outside f64 range".into()))
}

/// Report at `(n, epsilon)` with repetitions reaching `target`. Bit success
/// is taken at `reference_n`, where it has reached its asymptotic value.
pub fn application_report(
    n: usize,
    epsilon: f64,
    target: f64,
    reference_n: usize,
    tie: TieRule,
) -> Result<PerformanceReport> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::Unsupported(format!("register size must be even (got {n})")));
    }
    let est = expected_success(reference_n.max(n), epsilon, tie)?;
    let r = repetitions_for(target, est.f_bar)?;
    let cost = asymptotic_cost(n, epsilon)?;
    let g_inv = cost.n_states / 1.5f64.powi(n as i32);
    let base = r as f64 * n as f64 * g_inv;
    let ratio = scaled_ratio(n, base * cost.steps)?;
    let rounded = cost.steps.round();
    let ratio_rounded_steps = scaled_ratio(n, base * rounded)?;
    let nf = n as f64;
    let log_ratio = base.ln() + cost.steps.ln() + nf * 1.5f64.ln() + 2f64.ln()
        - nf * 3f64.ln()
        - (-(3f64.powi(-(n as i32)))).ln_1p();
    Ok(PerformanceReport {
        n,
        epsilon,
        n_states: cost.n_states,
        steps: cost.steps,
        steps_rounded: rounded as u64,
        samples: cost.samples,
        repetitions: r,
        resources: base * 1.5f64.powi(n as i32) * cost.steps,
        data_bits: data_bits_exact(n).to_string(),
        ratio,
        ratio_rounded_steps,
        log_ratio,
        f_e: est.f_e,
        f_bar: est.f_bar,
        amplified: amplify(est.f_bar, r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_bits_small() {
        assert_eq!(data_bits_exact(2), BigInt::from(4));
        assert_eq!(data_bits_exact(4), BigInt::from(40));
    }

    #[test]
    fn big_and_log_domains_agree() {
        for n in [20, 44, 100, 200] {
            let rep = application_report(n, 0.048, 0.999, 16, TieRule::Failure).unwrap();
            assert!((rep.ratio.ln() - rep.log_ratio).abs() < 1e-10, "{n}: {} vs {}", rep.ratio.ln(), rep.log_ratio);
        }
    }

    #[test]
    fn odd_register_rejected() {
        assert!(application_report(7, 0.048, 0.999, 16, TieRule::Failure).is_err());
    }
}
