//! Explicit statevector simulation for small registers. Slow on purpose:
//! it exists to cross-check the tableau engine.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{GeneralPauli, Letter, PauliWord, Symplectic};

use super::circuit::{CircuitParams, Gate};

/// Largest register the dense simulator accepts.
pub const MAX_DENSE_QUBITS: usize = 6;

/// Amplitudes over the computational basis. Qubit 0 is the most significant
/// bit of the basis index, so `|q0 q1 ... q_{n-1}>` reads left to right.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_QUBITS {
            return Err(Error::Resource(format!(
                "dense simulation supports 1..={MAX_DENSE_QUBITS} qubits (got {n})"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_params(params: &CircuitParams) -> Result<Self> {
        let mut psi = StateVector::zero(params.qubits())?;
        for g in params.preparation() {
            psi.apply(g);
        }
        Ok(psi)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// Applies a 2x2 unitary `[[a, b], [c, d]]` to qubit `q`.
    pub fn apply_1q(&mut self, q: usize, u: [[Complex64; 2]; 2]) {
        let m = self.mask(q);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | m]);
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | m] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    pub fn apply(&mut self, gate: Gate) {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match gate {
            Gate::H(q) => self.apply_1q(q, [[r, r], [r, -r]]),
            Gate::S(q) => self.apply_1q(q, [[one, zero], [zero, Complex64::i()]]),
            Gate::Z(q) => self.apply_1q(q, [[one, zero], [zero, -one]]),
            Gate::X(q) => self.apply_1q(q, [[zero, one], [one, zero]]),
            Gate::Cnot(c, t) => {
                let (mc, mt) = (self.mask(c), self.mask(t));
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            Gate::Gamma1(_) | Gate::Gamma2(_) => {
                for g in gate.primitives() {
                    self.apply(g);
                }
            }
        }
    }

    /// `P|psi>` for a phased Pauli operator.
    pub fn apply_pauli(&self, p: &GeneralPauli) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let mut flip = 0usize;
        for q in 0..self.n {
            if matches!(p.letter(q), Some(Letter::X | Letter::Y)) {
                flip |= self.mask(q);
            }
        }
        let global = Complex64::i().powu(p.phase().exponent() as u32);
        for (b, &a) in self.amps.iter().enumerate() {
            let mut f = global;
            for q in 0..self.n {
                let set = b & self.mask(q) != 0;
                match p.letter(q) {
                    Some(Letter::Z) if set => f = -f,
                    // Y|0> = i|1>, Y|1> = -i|0>.
                    Some(Letter::Y) => f *= if set { -Complex64::i() } else { Complex64::i() },
                    _ => {}
                }
            }
            out[b ^ flip] += f * a;
        }
        out
    }

    /// `<psi|P|psi>`.
    pub fn expectation_general(&self, p: &GeneralPauli) -> Complex64 {
        self.apply_pauli(p)
            .iter()
            .zip(&self.amps)
            .map(|(pa, a)| a.conj() * pa)
            .sum()
    }

    /// Real expectation of a full-weight observable.
    pub fn expectation(&self, obs: &PauliWord) -> Result<f64> {
        if obs.qubits() != self.n {
            return Err(crate::error::usage(format!(
                "observable {obs} has {} qubits, state has {}",
                obs.len(),
                self.n
            )));
        }
        Ok(self.expectation_general(&obs.to_general()).re)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Dense matrix of a phased Pauli operator, for checking products.
pub fn pauli_matrix(p: &GeneralPauli) -> Result<Vec<Vec<Complex64>>> {
    let n = p.qubits();
    let dim = 1usize << n;
    let mut cols = Vec::with_capacity(dim);
    for b in 0..dim {
        let mut basis = StateVector::zero(n)?;
        basis.amps[0] = Complex64::new(0.0, 0.0);
        basis.amps[b] = Complex64::new(1.0, 0.0);
        cols.push(basis.apply_pauli(p));
    }
    Ok((0..dim)
        .map(|r| (0..dim).map(|c| cols[c][r]).collect())
        .collect())
}

/// Plain matrix product.
pub fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let dim = a.len();
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| (0..dim).map(|k| a[r][k] * b[k][c]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    #[test]
    fn bell_expectations() {
        let psi = StateVector::from_params(&"000,00".parse().unwrap()).unwrap();
        assert!((psi.expectation(&w("XX")).unwrap() - 1.0).abs() < 1e-12);
        assert!((psi.expectation(&w("YY")).unwrap() + 1.0).abs() < 1e-12);
        assert!((psi.expectation(&w("ZZ")).unwrap() - 1.0).abs() < 1e-12);
        assert!(psi.expectation(&w("ZX")).unwrap().abs() < 1e-12);
    }

    #[test]
    fn gamma_rotations_map_z() {
        // Γ1 Z Γ1† = X and Γ2 Z Γ2† = Y, checked on |0>.
        let mut psi = StateVector::zero(1).unwrap();
        psi.apply(Gate::Gamma1(0));
        let x = GeneralPauli::single(1, 0, Letter::X).unwrap();
        assert!((psi.expectation_general(&x).re - 1.0).abs() < 1e-12);
        let mut psi = StateVector::zero(1).unwrap();
        psi.apply(Gate::Gamma2(0));
        let y = GeneralPauli::single(1, 0, Letter::Y).unwrap();
        assert!((psi.expectation_general(&y).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_large_registers() {
        assert!(matches!(StateVector::zero(7), Err(Error::Resource(_))));
    }
}
