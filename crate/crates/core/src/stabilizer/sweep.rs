//! Random two-qubit mixed states classified by the sign pattern of their
//! nine two-body Pauli expectations.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::context::{signs_from_config_id, MagicSquare};
use crate::error::{usage, Result};
use crate::pauli::{GeneralPauli, PauliWord};

use super::circuit::Gate;
use super::dense::StateVector;
use super::stats::ShotTable;

/// Number of sign patterns over the nine two-qubit words.
pub const CONFIGS: usize = 512;

/// Target success probability of the shot count averaged in the sweep.
pub const SWEEP_SUCCESS: f64 = 0.95;

/// Cap on the per-observable shot count (unbiased or nearly unbiased words).
pub const SWEEP_SHOT_CAP: f64 = 1e4;

const CHUNK: u64 = 4096;

/// One row of the sweep table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub config_id: u16,
    pub occurrences: u64,
    /// Lowest observed nine-observable average shot count; `None` if the
    /// configuration never occurred.
    pub min_avg_smix: Option<f64>,
    pub restrictions: u8,
    pub star: bool,
}

/// Expectations of the nine two-qubit words (alphabetical order) on one
/// random mixed state.
///
/// Circuit: a random `U(theta, phi)` on each qubit, `CNOT(0, 1)`, another
/// random `U` layer, then a random-not on each qubit (`X` with probability
/// `x_q`, `x_q` uniform). The random-nots make the state a mixture of four
/// pure branches.
pub fn random_mixed_expectations<R: Rng + ?Sized>(rng: &mut R) -> [f64; 9] {
    let mut layer = || -> [[[Complex64; 2]; 2]; 2] {
        let mut draw = || {
            let theta = rng.gen::<f64>() * std::f64::consts::PI;
            let phi = rng.gen::<f64>() * std::f64::consts::TAU;
            rotation(theta, phi)
        };
        [draw(), draw()]
    };
    let first = layer();
    let second = layer();
    let flips = [rng.gen::<f64>(), rng.gen::<f64>()];

    let words: Vec<GeneralPauli> = PauliWord::all(2)
        .expect("two qubits")
        .map(|w| w.to_general())
        .collect();
    let mut out = [0.0; 9];
    for branch in 0..4u8 {
        let mut weight = 1.0;
        let mut psi = StateVector::zero(2).expect("two qubits");
        for q in 0..2 {
            psi.apply_1q(q, first[q]);
        }
        psi.apply(Gate::Cnot(0, 1));
        for q in 0..2 {
            psi.apply_1q(q, second[q]);
        }
        for q in 0..2 {
            let flip = branch >> q & 1 == 1;
            weight *= if flip { flips[q] } else { 1.0 - flips[q] };
            if flip {
                psi.apply(Gate::X(q));
            }
        }
        for (slot, w) in out.iter_mut().zip(&words) {
            *slot += weight * psi.expectation_general(w).re;
        }
    }
    out
}

/// `Rz(phi) Rx(-pi/2) Rz(theta) Rx(pi/2)` as a 2x2 matrix.
fn rotation(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let rz = |a: f64| {
        let zero = Complex64::new(0.0, 0.0);
        [
            [Complex64::from_polar(1.0, -a / 2.0), zero],
            [zero, Complex64::from_polar(1.0, a / 2.0)],
        ]
    };
    let rx = |a: f64| {
        let c = Complex64::new((a / 2.0).cos(), 0.0);
        let s = Complex64::new(0.0, -(a / 2.0).sin());
        [[c, s], [s, c]]
    };
    let half = std::f64::consts::FRAC_PI_2;
    mat(rz(phi), mat(rx(-half), mat(rz(theta), rx(half))))
}

fn mat(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Sign-pattern id: bit `j` is set when word `j` prefers `-1`. Exact zeros
/// count as `+1`.
pub fn config_id(expectations: &[f64; 9]) -> u16 {
    expectations
        .iter()
        .enumerate()
        .filter(|(_, &e)| e < 0.0)
        .fold(0u16, |id, (j, _)| id | 1 << j)
}

/// Average exact shot count over the nine words.
pub fn average_shots(expectations: &[f64; 9], table: &ShotTable) -> f64 {
    expectations
        .iter()
        .map(|e| table.lookup(0.5 * (1.0 + e.abs())))
        .sum::<f64>()
        / 9.0
}

#[derive(Clone)]
struct Tally {
    occurrences: Vec<u64>,
    best: Vec<f64>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            occurrences: vec![0; CONFIGS],
            best: vec![f64::INFINITY; CONFIGS],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for i in 0..CONFIGS {
            self.occurrences[i] += other.occurrences[i];
            self.best[i] = self.best[i].min(other.best[i]);
        }
        self
    }
}

/// Runs the sweep with `samples` random states. Work is split into fixed
/// chunks, each with its own stream derived from `seed`, so the result does
/// not depend on the thread count.
pub fn sweep_2q(samples: u64, seed: u64) -> Result<Vec<SweepRow>> {
    if samples == 0 {
        return Err(usage("sweep needs at least one sample"));
    }
    let table = ShotTable::new(SWEEP_SUCCESS, SWEEP_SHOT_CAP)?;
    let chunks = samples.div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut tally = Tally::new();
            let count = CHUNK.min(samples - c * CHUNK);
            for _ in 0..count {
                let e = random_mixed_expectations(&mut rng);
                let id = config_id(&e) as usize;
                tally.occurrences[id] += 1;
                tally.best[id] = tally.best[id].min(average_shots(&e, &table));
            }
            tally
        })
        .reduce(Tally::new, Tally::merge);

    let square = MagicSquare::new();
    Ok((0..CONFIGS)
        .map(|id| {
            let label = square.label(&signs_from_config_id(id as u16));
            SweepRow {
                config_id: id as u16,
                occurrences: tally.occurrences[id],
                min_avg_smix: tally.best[id].is_finite().then_some(tally.best[id]),
                restrictions: label.restrictions,
                star: label.star(),
            }
        })
        .collect())
}

/// Writes the table as CSV. Unobserved configurations leave `min_avg_Smix`
/// empty.
pub fn write_csv(rows: &[SweepRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "config_id,occurrences,min_avg_Smix,restrictions,star")?;
    for r in rows {
        let smix = r.min_avg_smix.map(|v| format!("{v:.6}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            r.config_id, r.occurrences, smix, r.restrictions, r.star as u8
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectations_are_physical() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let e = random_mixed_expectations(&mut rng);
            assert!(e.iter().all(|v| v.abs() <= 1.0 + 1e-12));
            // Purity bound for two qubits: sum of all 15 squared
            // expectations is at most 3, so the nine two-body ones are too.
            assert!(e.iter().map(|v| v * v).sum::<f64>() <= 3.0 + 1e-9);
        }
    }

    #[test]
    fn rotation_is_unitary() {
        let u = rotation(0.7, 2.1);
        let p = mat(
            u,
            [
                [u[0][0].conj(), u[1][0].conj()],
                [u[0][1].conj(), u[1][1].conj()],
            ],
        );
        assert!((p[0][0] - 1.0).norm() < 1e-12 && p[0][1].norm() < 1e-12);
    }

    #[test]
    fn small_sweep_partitions_samples() {
        let rows = sweep_2q(5000, 9).unwrap();
        assert_eq!(rows.len(), CONFIGS);
        assert_eq!(rows.iter().map(|r| r.occurrences).sum::<u64>(), 5000);
        assert!(rows.iter().all(|r| r.restrictions != 6));
        assert_eq!(rows, sweep_2q(5000, 9).unwrap());
    }
}
