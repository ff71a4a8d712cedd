//! Majority vote across independent repetitions.

use statrs::function::erf::erfc_inv;

use crate::error::{Error, Result};
use crate::stabilizer::stats::majority_probability;

/// Success of a strict majority over `r` repetitions, each correct with
/// probability `f_bar`.
pub fn amplify(f_bar: f64, r: u64) -> f64 {
    majority_probability(r, f_bar)
}

/// Smallest odd `r` with `amplify(f_bar, r) >= target`.
pub fn repetitions_for(target: f64, f_bar: f64) -> Result<u64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::Domain(format!("target {target} outside (0, 1)")));
    }
    if !(f_bar > 0.5 && f_bar <= 1.0) {
        return Err(Error::Domain(format!(
            "success {f_bar} <= 1/2 cannot be amplified by any finite r"
        )));
    }
    let ok = |k: u64| amplify(f_bar, 2 * k + 1) >= target;
    let mut hi = 1u64;
    while !ok(hi) {
        hi = hi.checked_mul(2).ok_or_else(|| Error::Resource("repetition count overflow".into()))?;
        if hi > 1 << 40 {
            return Err(Error::Resource(format!("success {f_bar} needs more than 2^41 repetitions")));
        }
    }
    let mut lo = 0u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(2 * lo + 1)
}

/// Constant `2 f (1-f) / (f - 1/2)^2` of the normal approximation
/// `r ~ c * erfc_inv(2 - 2F)^2`.
pub fn normal_constant(f_bar: f64) -> f64 {
    let d = f_bar - 0.5;
    2.0 * f_bar * (1.0 - f_bar) / (d * d)
}

/// Real-valued repetition count from the normal approximation.
pub fn repetitions_normal(target: f64, f_bar: f64) -> f64 {
    let z = erfc_inv(2.0 - 2.0 * target);
    normal_constant(f_bar) * z * z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert!((amplify(0.6, 1) - 0.6).abs() < 1e-12);
        assert!((amplify(0.75, 3) - 0.84375).abs() < 1e-12);
        assert_eq!(repetitions_for(0.84, 0.75).unwrap(), 3);
        assert_eq!(repetitions_for(0.5, 0.75).unwrap(), 1);
        assert!(repetitions_for(0.9, 0.5).is_err());
    }

    #[test]
    fn minimality() {
        for &f in &[0.55, 0.6, 0.7, 0.9] {
            let r = repetitions_for(0.99, f).unwrap();
            assert!(amplify(f, r) >= 0.99);
            if r > 1 {
                assert!(amplify(f, r - 2) < 0.99);
            }
        }
    }
}
