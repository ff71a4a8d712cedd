//! Statistics of a homogeneous mixture of stabilizer states and the number
//! of shots needed to read its majority outcome.

use serde::Serialize;
use statrs::distribution::{Binomial, DiscreteCDF};
use statrs::function::erf::erf_inv;

use crate::error::{usage, Error, Result};
use crate::pauli::PauliWord;

use super::state::{StabilizerState, Verdict};

/// Cap assigned to the shot metric when the majority is absent or wrong.
pub const DEFAULT_METRIC_CAP: f64 = 1e4;

/// Largest shot count the exact search will consider.
const MAX_SHOTS: u64 = 1 << 40;

/// Outcome counts of one observable over a selection of states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MajorityStats {
    pub plus: usize,
    pub minus: usize,
    pub unbiased: usize,
    /// Probability of the more likely outcome, in `[1/2, 1]`.
    pub p_majority: f64,
    /// Sign of the more likely outcome, `0` on an exact tie.
    pub majority: i8,
}

impl MajorityStats {
    pub fn from_counts(plus: usize, minus: usize, unbiased: usize) -> Result<Self> {
        let total = plus + minus + unbiased;
        if total == 0 {
            return Err(usage("empty selection"));
        }
        let p_plus = (plus as f64 + unbiased as f64 / 2.0) / total as f64;
        let majority = match plus.cmp(&minus) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        };
        Ok(MajorityStats {
            plus,
            minus,
            unbiased,
            p_majority: p_plus.max(1.0 - p_plus),
            majority,
        })
    }

    /// Probability of observing `sign` in a single shot.
    pub fn p_toward(&self, sign: i8) -> f64 {
        let total = (self.plus + self.minus + self.unbiased) as f64;
        let favoured = if sign >= 0 { self.plus } else { self.minus };
        (favoured as f64 + self.unbiased as f64 / 2.0) / total
    }
}

/// Majority statistics of `obs` on the equal-weight mixture of `states`.
pub fn selection_stats(states: &[StabilizerState], obs: &PauliWord) -> Result<MajorityStats> {
    let (mut plus, mut minus, mut unbiased) = (0, 0, 0);
    for s in states {
        match s.expectation(obs)? {
            Verdict::Plus => plus += 1,
            Verdict::Minus => minus += 1,
            Verdict::Unbiased => unbiased += 1,
        }
    }
    MajorityStats::from_counts(plus, minus, unbiased)
}

/// Probability that more than half of `shots` Bernoulli(`p`) trials succeed.
pub fn majority_probability(shots: u64, p: f64) -> f64 {
    if shots == 0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    let dist = Binomial::new(p, shots).expect("p in (0, 1)");
    dist.sf(shots / 2)
}

/// Smallest shot count whose strict majority is correct with probability
/// above `f`, for single-shot success probability `p`.
///
/// Even counts never beat the odd count below them, and the success
/// probability is increasing over odd counts, so the search runs over odd
/// values only.
pub fn sampling_requirement_exact(p: f64, f: f64) -> Result<u64> {
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::Domain(format!("target probability {f} outside (0, 1)")));
    }
    if !(p > 0.5 && p <= 1.0) {
        return Err(Error::Domain(format!(
            "majority probability {p} <= 1/2: sampling requirement is divergent"
        )));
    }
    if p == 1.0 {
        return Ok(1);
    }
    let ok = |k: u64| majority_probability(2 * k + 1, p) > f;
    // Search over k with shots = 2k + 1.
    let mut hi = 1u64;
    while !ok(hi - 1) {
        hi *= 2;
        if 2 * hi + 1 > MAX_SHOTS {
            return Err(Error::Resource(format!(
                "sampling requirement for p = {p} exceeds {MAX_SHOTS} shots"
            )));
        }
    }
    let mut lo = 0u64;
    hi -= 1;
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

/// Variance-based shot metric `p(1-p)/(p-1/2)^2`, capped at `cap` and set to
/// `cap` when `p <= 1/2`.
pub fn sampling_requirement_metric(p: f64, cap: f64) -> f64 {
    if p <= 0.5 {
        return cap;
    }
    let d = p - 0.5;
    (p * (1.0 - p) / (d * d)).min(cap)
}

/// Normal-approximation factor `2 erfinv(2f - 1)^2` that turns the metric
/// into a shot count for success probability `f`.
pub fn normal_prefactor(f: f64) -> f64 {
    let z = erf_inv(2.0 * f - 1.0);
    2.0 * z * z
}

/// Precomputed step function `p -> sampling_requirement_exact(p, f)` for
/// repeated lookups, saturating at `cap` shots.
#[derive(Clone, Debug)]
pub struct ShotTable {
    cap: f64,
    /// `thresholds[k]` is the majority probability above which `2k + 1`
    /// shots suffice. Strictly decreasing.
    thresholds: Vec<f64>,
}

impl ShotTable {
    pub fn new(f: f64, cap: f64) -> Result<Self> {
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::Domain(format!("target probability {f} outside (0, 1)")));
        }
        let mut thresholds = Vec::new();
        let mut shots = 1u64;
        while (shots as f64) <= cap {
            let (mut lo, mut hi) = (0.5, 1.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if majority_probability(shots, mid) > f {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            thresholds.push(hi);
            shots += 2;
        }
        Ok(ShotTable { cap, thresholds })
    }

    /// Shot count for majority probability `p`, or the cap when `p <= 1/2`
    /// or more than `cap` shots would be needed.
    pub fn lookup(&self, p: f64) -> f64 {
        if p >= 1.0 {
            return 1.0;
        }
        // First index whose threshold lies below p.
        let k = self.thresholds.partition_point(|&t| t >= p);
        if k == self.thresholds.len() {
            self.cap
        } else {
            (2 * k + 1) as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(p: f64, f: f64) -> u64 {
        // Direct summation of binomial terms.
        (1..).find(|&s: &u64| {
            let mut total = 0.0;
            for j in s / 2 + 1..=s {
                let ln = statrs::function::factorial::ln_binomial(s, j)
                    + j as f64 * p.ln()
                    + (s - j) as f64 * (1.0 - p).ln();
                total += ln.exp();
            }
            total > f
        })
        .unwrap()
    }

    #[test]
    fn exact_requirement_matches_scan() {
        for &p in &[0.55, 0.6, 0.66, 0.75, 0.8, 0.9, 0.99] {
            for &f in &[0.6, 0.9, 0.95, 0.999] {
                assert_eq!(sampling_requirement_exact(p, f).unwrap(), brute(p, f), "p={p} f={f}");
            }
        }
    }

    #[test]
    fn exact_requirement_edges() {
        assert_eq!(sampling_requirement_exact(1.0, 0.999).unwrap(), 1);
        assert!(matches!(sampling_requirement_exact(0.5, 0.9), Err(Error::Domain(_))));
        assert!(matches!(sampling_requirement_exact(0.4, 0.9), Err(Error::Domain(_))));
        assert!(sampling_requirement_exact(0.7, 1.0).is_err());
    }

    #[test]
    fn shot_table_matches_exact() {
        let table = ShotTable::new(0.95, 1e4).unwrap();
        for i in 1..400 {
            let p = 0.5 + i as f64 / 800.0 + 1e-7;
            let exact = sampling_requirement_exact(p, 0.95).unwrap() as f64;
            assert_eq!(table.lookup(p), exact.min(1e4), "p={p}");
        }
        assert_eq!(table.lookup(0.5), 1e4);
        assert_eq!(table.lookup(1.0), 1.0);
    }

    #[test]
    fn metric_values() {
        assert_eq!(sampling_requirement_metric(1.0, 1e4), 0.0);
        assert_eq!(sampling_requirement_metric(0.5, 1e4), 1e4);
        assert!((sampling_requirement_metric(0.75, 1e4) - 3.0).abs() < 1e-12);
        assert_eq!(sampling_requirement_metric(0.5001, 10.0), 10.0);
    }

    #[test]
    fn majority_counts() {
        let s = MajorityStats::from_counts(0, 1, 2).unwrap();
        assert_eq!(s.majority, -1);
        assert!((s.p_majority - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.p_toward(1) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(MajorityStats::from_counts(0, 0, 4).unwrap().p_majority, 0.5);
        assert!(MajorityStats::from_counts(0, 0, 0).is_err());
    }
}
