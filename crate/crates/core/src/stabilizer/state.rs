use rand::Rng;
use serde::Serialize;

use crate::error::{usage, Result};
use crate::pauli::{GeneralPauli, Letter, PauliWord, Phase, Symplectic};

use super::circuit::{CircuitParams, Gate};

/// Outcome statistics of a full-weight observable on a stabilizer state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Always `+1`.
    Plus,
    /// Always `-1`.
    Minus,
    /// `±1` with probability 1/2 each.
    Unbiased,
}

impl Verdict {
    /// Expectation value: `+1`, `-1` or `0`.
    pub fn value(self) -> i8 {
        match self {
            Verdict::Plus => 1,
            Verdict::Minus => -1,
            Verdict::Unbiased => 0,
        }
    }

    pub fn is_deterministic(self) -> bool {
        self != Verdict::Unbiased
    }
}

/// Pure n-qubit stabilizer state held as `n` signed, commuting, independent
/// generators. Generators are kept in reduced row-echelon form over the
/// packed symplectic key, which makes them a canonical description of the
/// stabilizer group: two states are equal iff their generator lists are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerState {
    n: usize,
    generators: Vec<GeneralPauli>,
}

impl StabilizerState {
    /// `|0...0>`, stabilized by `Z_q` for every qubit.
    pub fn zero(n: usize) -> Result<Self> {
        let generators = (0..n)
            .map(|q| GeneralPauli::single(n, q, Letter::Z))
            .collect::<Result<Vec<_>>>()?;
        let mut state = StabilizerState { n, generators };
        state.canonicalize();
        Ok(state)
    }

    /// Runs the preparation circuit on `|0...0>`.
    pub fn build(params: &CircuitParams) -> Result<Self> {
        let n = params.qubits();
        if n % 2 == 1 {
            return Err(crate::Error::Unsupported(format!(
                "eigenstate circuit is defined for even n (got {n})"
            )));
        }
        let mut state = StabilizerState::zero(n)?;
        for g in params.preparation() {
            state.apply_unreduced(g);
        }
        state.canonicalize();
        Ok(state)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[GeneralPauli] {
        &self.generators
    }

    pub fn apply(&mut self, gate: Gate) {
        self.apply_unreduced(gate);
        self.canonicalize();
    }

    fn apply_unreduced(&mut self, gate: Gate) {
        for g in gate.primitives() {
            for row in &mut self.generators {
                conjugate(row, g);
            }
        }
    }

    fn canonicalize(&mut self) {
        let width = 2 * self.n;
        let mut r = 0;
        for bit in (0..width).rev() {
            let Some(found) = (r..self.generators.len()).find(|&i| self.generators[i].key() >> bit & 1 == 1)
            else {
                continue;
            };
            self.generators.swap(r, found);
            let pivot = self.generators[r];
            for i in 0..self.generators.len() {
                if i != r && self.generators[i].key() >> bit & 1 == 1 {
                    self.generators[i] = self.generators[i].mul_unchecked(&pivot);
                }
            }
            r += 1;
        }
        debug_assert_eq!(r, self.n, "generators are not independent");
    }

    /// Statistics of measuring `obs` on this state.
    pub fn expectation(&self, obs: &PauliWord) -> Result<Verdict> {
        if obs.len() != self.n {
            return Err(usage(format!(
                "observable {obs} has {} qubits, state has {}",
                obs.len(),
                self.n
            )));
        }
        Ok(self.verdict(&obs.to_general()))
    }

    /// Same as [`Self::expectation`] for any Hermitian Pauli; the operator's
    /// own sign is taken into account.
    pub fn verdict(&self, obs: &GeneralPauli) -> Verdict {
        if self.generators.iter().any(|g| !g.commutes_bits(obs)) {
            return Verdict::Unbiased;
        }
        let mut rest = obs.key();
        let mut acc = GeneralPauli::identity(self.n).expect("valid size");
        for row in &self.generators {
            let pivot = 63 - row.key().leading_zeros();
            if rest >> pivot & 1 == 1 {
                acc = acc.mul_unchecked(row);
                rest ^= row.key();
            }
        }
        if rest != 0 {
            // Unreachable for a full-rank stabilizer group.
            debug_assert!(false, "commuting operator outside the stabilizer group");
            return Verdict::Unbiased;
        }
        // acc = i^a P and obs = i^b P, so the eigenvalue is i^(a-b).
        let relative = acc.phase() * Phase::from_exponent(4 - obs.phase().exponent() as u32);
        match relative.sign() {
            Some(1) => Verdict::Plus,
            Some(_) => Verdict::Minus,
            None => {
                debug_assert!(false, "non-Hermitian operator");
                Verdict::Unbiased
            }
        }
    }

    /// Full-weight observables with a definite outcome, in alphabetical order.
    pub fn deterministic_set(&self) -> Vec<PauliWord> {
        PauliWord::all(self.n)
            .expect("valid size")
            .filter(|w| self.verdict(&w.to_general()).is_deterministic())
            .collect()
    }

    /// One measurement outcome of `obs` on a fresh copy of the state. The rng
    /// is only consumed when the outcome is random.
    pub fn sample<R: Rng + ?Sized>(&self, obs: &PauliWord, rng: &mut R) -> Result<i8> {
        Ok(match self.expectation(obs)? {
            Verdict::Plus => 1,
            Verdict::Minus => -1,
            Verdict::Unbiased => {
                if rng.gen::<bool>() {
                    1
                } else {
                    -1
                }
            }
        })
    }

    /// Projective measurement of `obs`, collapsing the state.
    pub fn measure<R: Rng + ?Sized>(&mut self, obs: &PauliWord, rng: &mut R) -> Result<i8> {
        let verdict = self.expectation(obs)?;
        if verdict.is_deterministic() {
            return Ok(verdict.value());
        }
        let op = obs.to_general();
        let k = self
            .generators
            .iter()
            .position(|g| !g.commutes_bits(&op))
            .expect("unbiased implies an anticommuting generator");
        let pivot = self.generators[k];
        for i in 0..self.generators.len() {
            if i != k && !self.generators[i].commutes_bits(&op) {
                self.generators[i] = self.generators[i].mul_unchecked(&pivot);
            }
        }
        let outcome: i8 = if rng.gen::<bool>() { 1 } else { -1 };
        self.generators[k] = if outcome == 1 {
            op
        } else {
            op.with_phase(Phase::MINUS_ONE)
        };
        self.canonicalize();
        Ok(outcome)
    }
}

/// `P -> U P U†` for a primitive gate, using the tableau update rules for
/// Hermitian Paulis with a sign bit.
fn conjugate(p: &mut GeneralPauli, gate: Gate) {
    let (x, z) = p.masks_mut();
    let bit = |m: u64, q: usize| m >> q & 1 == 1;
    let flip = match gate {
        Gate::H(q) => {
            let (bx, bz) = (bit(*x, q), bit(*z, q));
            *x = (*x & !(1 << q)) | ((bz as u64) << q);
            *z = (*z & !(1 << q)) | ((bx as u64) << q);
            bx && bz
        }
        Gate::S(q) => {
            let flip = bit(*x, q) && bit(*z, q);
            *z ^= (*x >> q & 1) << q;
            flip
        }
        Gate::Z(q) => bit(*x, q),
        Gate::X(q) => bit(*z, q),
        Gate::Cnot(c, t) => {
            let (xc, zc, xt, zt) = (bit(*x, c), bit(*z, c), bit(*x, t), bit(*z, t));
            *x ^= (xc as u64) << t;
            *z ^= (zt as u64) << c;
            xc && zt && !(xt ^ zc)
        }
        Gate::Gamma1(_) | Gate::Gamma2(_) => unreachable!("composite gates are expanded"),
    };
    if flip {
        p.flip_sign();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    fn state(p: &str) -> StabilizerState {
        StabilizerState::build(&p.parse().unwrap()).unwrap()
    }

    #[test]
    fn ghz4_expectations() {
        let ghz = state("00000,0000");
        assert_eq!(ghz.expectation(&w("ZZZZ")).unwrap(), Verdict::Plus);
        assert_eq!(ghz.expectation(&w("XXXX")).unwrap(), Verdict::Plus);
        assert_eq!(ghz.expectation(&w("XXYY")).unwrap(), Verdict::Minus);
        assert_eq!(ghz.expectation(&w("ZXXZ")).unwrap(), Verdict::Unbiased);
    }

    #[test]
    fn bell_states() {
        let bell = state("000,00");
        assert_eq!(bell.expectation(&w("XX")).unwrap(), Verdict::Plus);
        assert_eq!(bell.expectation(&w("YY")).unwrap(), Verdict::Minus);
        assert_eq!(bell.expectation(&w("ZZ")).unwrap(), Verdict::Plus);
        assert_eq!(bell.deterministic_set(), vec![w("XX"), w("YY"), w("ZZ")]);
        let iphase = state("100,00");
        assert_eq!(iphase.deterministic_set(), vec![w("XY"), w("YX"), w("ZZ")]);
        for o in ["XY", "YX", "ZZ"] {
            assert_eq!(iphase.expectation(&w(o)).unwrap(), Verdict::Plus);
        }
    }

    #[test]
    fn iphase_ghz4_is_on_odd_half() {
        let s = state("10000,0000");
        let ctx = crate::context::generated_context(w("ZZZZ"), crate::context::Half::Odd).unwrap();
        assert_eq!(s.deterministic_set(), ctx.members());
    }

    #[test]
    fn size_mismatch_is_usage_error() {
        assert!(state("000,00").expectation(&w("XXX")).is_err());
    }

    #[test]
    fn sampling_consumes_rng_only_when_unbiased() {
        let bell = state("000,00");
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            assert_eq!(bell.sample(&w("ZZ"), &mut a).unwrap(), 1);
        }
        assert_eq!(a.gen::<u64>(), b.gen::<u64>());
    }

    #[test]
    fn measurement_collapses() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut s = state("00000,0000");
            let first = s.measure(&w("ZXXZ"), &mut rng).unwrap();
            assert_eq!(s.expectation(&w("ZXXZ")).unwrap().value(), first);
            // ZZZZ commutes with ZXXZ and survives the collapse.
            assert_eq!(s.expectation(&w("ZZZZ")).unwrap(), Verdict::Plus);
        }
    }
}
