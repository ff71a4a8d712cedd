//! Classical and quantum random access code baselines, and the register
//! sizes where this code overtakes them.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, Discrete};

use crate::error::{Error, Result};

use super::amplify::repetitions_for;
use super::tolerance::{asymptotic_cost, expected_success, TieRule};

/// Exact success of the majority-bit classical code for an integer ratio
/// `m/k`: `E[max(K, M-K)] / M` with `K ~ B(M, 1/2)`.
pub fn rac_exact(ratio: u64) -> Result<f64> {
    if ratio == 0 {
        return Err(Error::Domain("ratio m/k must be at least 1".into()));
    }
    let dist = Binomial::new(0.5, ratio).expect("valid binomial");
    let expected: f64 = (0..=ratio)
        .map(|k| dist.pmf(k) * k.max(ratio - k) as f64)
        .sum();
    Ok(expected / ratio as f64)
}

/// Normal form `1/2 + sqrt((k/m) / (2 pi))`.
pub fn rac_normal(k_over_m: f64) -> f64 {
    0.5 + (k_over_m / (2.0 * std::f64::consts::PI)).sqrt()
}

/// Bounds `1/2 + sqrt((k/m) / (3 pi / 2)) <= f <= 1/2 + sqrt(k/m) / 2`.
pub fn qrac_bounds(k_over_m: f64) -> (f64, f64) {
    (
        0.5 + (k_over_m / (1.5 * std::f64::consts::PI)).sqrt(),
        0.5 + k_over_m.sqrt() / 2.0,
    )
}

/// Largest `k/m` at which `rac_normal` stays below `f`.
pub fn rac_threshold(f: f64) -> f64 {
    2.0 * std::f64::consts::PI * (f - 0.5).powi(2)
}

/// Largest `k/m` at which the upper quantum bound stays below `f`.
pub fn qrac_upper_threshold(f: f64) -> f64 {
    (2.0 * (f - 0.5)).powi(2)
}

/// Bit success estimated from a dit success, `f_dit^(1 / log2 d)`.
pub fn mub_bit_success(f_dit: f64, d: u32) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} < 2")));
    }
    Ok(f_dit.powf(1.0 / (d as f64).log2()))
}

/// Published dit successes of the `(d+1) log2 d -> log2 d` codes.
pub const MUB_DIT_SUCCESS: [(u32, f64); 6] = [
    (2, 0.789),
    (3, 0.637),
    (4, 0.5424),
    (5, 0.4700),
    (7, 0.3720),
    (8, 0.3372),
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MubRow {
    pub d: u32,
    pub f_dit: f64,
    pub f_bit: f64,
}

pub fn mub_table() -> Vec<MubRow> {
    MUB_DIT_SUCCESS
        .iter()
        .map(|&(d, f_dit)| MubRow {
            d,
            f_dit,
            f_bit: mub_bit_success(f_dit, d).expect("d >= 2"),
        })
        .collect()
}

/// Data bits at `n` qubits, `(3^n - 1) / 2`, as a float.
pub fn data_bits(n: usize) -> f64 {
    (3f64.powi(n as i32) - 1.0) / 2.0
}

/// Sent resources without repetitions, `n N_s T`.
pub fn resources(n: usize, epsilon: f64) -> Result<f64> {
    let c = asymptotic_cost(n, epsilon)?;
    Ok(n as f64 * c.n_states * c.steps)
}

/// Smallest even register sizes at which the code wins.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossovers {
    pub epsilon: f64,
    pub f_bar: f64,
    pub repetitions: u64,
    /// Beats the classical code.
    pub vs_rac: usize,
    /// Beats the upper bound of the single-qubit quantum codes.
    pub vs_qrac_upper: usize,
    /// Sends fewer resources than data bits after amplification.
    pub compression: usize,
    /// Same without repetitions.
    pub compression_single: usize,
}

const MAX_SCAN: usize = 200;

fn first_even(pred: impl Fn(usize) -> Result<bool>) -> Result<usize> {
    for n in (2..=MAX_SCAN).step_by(2) {
        if pred(n)? {
            return Ok(n);
        }
    }
    Err(Error::Resource(format!("no crossover up to n = {MAX_SCAN}")))
}

/// Crossovers at tolerance `epsilon`, using the asymptotic bit success
/// (taken at `reference_n`) and the repetitions reaching `target`.
pub fn crossovers(epsilon: f64, target: f64, reference_n: usize, tie: TieRule) -> Result<Crossovers> {
    let f_bar = expected_success(reference_n, epsilon, tie)?.f_bar;
    let r = repetitions_for(target, f_bar)?;
    let ratio = |n: usize| -> Result<f64> { Ok(resources(n, epsilon)? / data_bits(n)) };
    Ok(Crossovers {
        epsilon,
        f_bar,
        repetitions: r,
        vs_rac: first_even(|n| Ok(ratio(n)? < rac_threshold(f_bar)))?,
        vs_qrac_upper: first_even(|n| Ok(ratio(n)? < qrac_upper_threshold(f_bar)))?,
        compression: first_even(|n| Ok(r as f64 * ratio(n)? < 1.0))?,
        compression_single: first_even(|n| Ok(ratio(n)? < 1.0))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rac_values() {
        assert!((rac_exact(3).unwrap() - 0.75).abs() < 1e-12);
        assert!((rac_exact(1).unwrap() - 1.0).abs() < 1e-12);
        let mut prev = 1.0;
        for m in 1..60 {
            let f = rac_exact(m).unwrap();
            assert!(f > 0.5 && f <= prev + 1e-12);
            prev = f;
        }
        for m in 25..200 {
            assert!((rac_exact(m).unwrap() - rac_normal(1.0 / m as f64)).abs() < 0.005, "{m}");
        }
    }

    #[test]
    fn quantum_lower_bound_beats_rac() {
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert!(qrac_bounds(x).0 > rac_normal(x));
        }
    }

    #[test]
    fn mub_rows() {
        let expected = [0.789, 0.7524, 0.7365, 0.7224, 0.7031, 0.6960];
        for (row, want) in mub_table().iter().zip(expected) {
            assert!((row.f_bit - want).abs() < 5e-5, "{row:?}");
        }
        assert!((mub_bit_success(0.2, 5).unwrap() - 0.5).abs() < 1e-12);
        assert!((mub_bit_success(1.0, 7).unwrap() - 1.0).abs() < 1e-12);
        assert!(mub_bit_success(0.5, 1).is_err());
    }
}
