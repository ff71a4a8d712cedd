use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::context::{generated_context, Context, Half};
use crate::error::{usage, Error, Result};
use crate::pauli::{Letter, PauliWord, MAX_QUBITS};

/// Discrete parameters of the eigenstate preparation circuit.
///
/// `alpha[0]` toggles the phase gate on qubit 0 (choosing the half),
/// `alpha[1]` a `Z` on qubit 0, and `alpha[q]` for `q >= 2` an `X` on qubit
/// `q - 1`. `beta[q]` picks the basis rotation on qubit `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircuitParams {
    alpha: Vec<u8>,
    beta: Vec<u8>,
}

impl CircuitParams {
    pub fn new(alpha: Vec<u8>, beta: Vec<u8>) -> Result<Self> {
        let n = beta.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(usage(format!("beta must have 1..={MAX_QUBITS} entries")));
        }
        if alpha.len() != n + 1 {
            return Err(usage(format!(
                "alpha must have n + 1 = {} entries (got {})",
                n + 1,
                alpha.len()
            )));
        }
        if alpha.iter().any(|&a| a > 1) {
            return Err(usage("alpha entries must be 0 or 1"));
        }
        if beta.iter().any(|&b| b > 2) {
            return Err(usage("beta entries must be 0, 1 or 2"));
        }
        Ok(CircuitParams { alpha, beta })
    }

    pub fn zero(n: usize) -> Result<Self> {
        CircuitParams::new(vec![0; n + 1], vec![0; n])
    }

    pub fn qubits(&self) -> usize {
        self.beta.len()
    }

    pub fn alpha(&self) -> &[u8] {
        &self.alpha
    }

    pub fn beta(&self) -> &[u8] {
        &self.beta
    }

    /// Number of parameter settings, `2 * 6^n`.
    pub fn count(n: usize) -> u64 {
        2 * 6u64.pow(n as u32)
    }

    /// Canonical id: beta digits (qubit 0 most significant) form the high
    /// base-3 part, the alpha bits (alpha[0] most significant) the low
    /// binary part.
    pub fn id(&self) -> u64 {
        let n = self.qubits();
        let beta = self.beta.iter().fold(0u64, |acc, &b| acc * 3 + b as u64);
        let alpha = self.alpha.iter().fold(0u64, |acc, &a| acc * 2 + a as u64);
        beta * (1u64 << (n + 1)) + alpha
    }

    pub fn from_id(n: usize, id: u64) -> Result<Self> {
        if id >= CircuitParams::count(n) {
            return Err(usage(format!("parameter id {id} out of range for n = {n}")));
        }
        let alpha_span = 1u64 << (n + 1);
        let mut a = id % alpha_span;
        let mut b = id / alpha_span;
        let mut alpha = vec![0u8; n + 1];
        for slot in alpha.iter_mut().rev() {
            *slot = (a & 1) as u8;
            a >>= 1;
        }
        let mut beta = vec![0u8; n];
        for slot in beta.iter_mut().rev() {
            *slot = (b % 3) as u8;
            b /= 3;
        }
        CircuitParams::new(alpha, beta)
    }

    pub fn all(n: usize) -> impl Iterator<Item = CircuitParams> {
        (0..CircuitParams::count(n)).map(move |id| CircuitParams::from_id(n, id).expect("in range"))
    }

    /// Letter the rotation `Γ(beta)` maps `Z` onto.
    pub fn generator_letter(beta: u8) -> Letter {
        match beta {
            0 => Letter::Z,
            1 => Letter::X,
            _ => Letter::Y,
        }
    }

    /// Inverse of [`CircuitParams::generator_letter`].
    pub fn beta_for_letter(letter: Letter) -> u8 {
        match letter {
            Letter::Z => 0,
            Letter::X => 1,
            Letter::Y => 2,
        }
    }

    pub fn generator(&self) -> PauliWord {
        let letters: Vec<_> = self.beta.iter().map(|&b| Self::generator_letter(b)).collect();
        PauliWord::new(&letters).expect("valid length")
    }

    pub fn half(&self) -> Half {
        Half::from_parity(self.alpha[0] == 1)
    }

    /// Context the prepared state is an eigenstate of.
    pub fn context(&self) -> Result<Context> {
        generated_context(self.generator(), self.half())
    }

    /// Gate list of the preparation circuit, in time order.
    pub fn preparation(&self) -> Vec<Gate> {
        let n = self.qubits();
        let mut gates = vec![Gate::H(0)];
        gates.extend((1..n).map(|q| Gate::Cnot(q - 1, q)));
        if self.alpha[0] == 1 {
            gates.push(Gate::S(0));
        }
        if self.alpha[1] == 1 {
            gates.push(Gate::Z(0));
        }
        for q in 1..n {
            if self.alpha[q + 1] == 1 {
                gates.push(Gate::X(q));
            }
        }
        for (q, &b) in self.beta.iter().enumerate() {
            match b {
                1 => gates.push(Gate::Gamma1(q)),
                2 => gates.push(Gate::Gamma2(q)),
                _ => {}
            }
        }
        gates
    }
}

impl fmt::Display for CircuitParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.alpha {
            write!(f, "{a}")?;
        }
        f.write_char(',')?;
        for b in &self.beta {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for CircuitParams {
    type Err = Error;

    /// Parses `ALPHA,BETA`, e.g. `"10000,0120"`: `n + 1` binary digits, a
    /// comma, then `n` ternary digits.
    fn from_str(s: &str) -> Result<Self> {
        let (alpha, beta) = s
            .trim()
            .split_once(',')
            .ok_or_else(|| Error::Parse("expected ALPHA,BETA".into()))?;
        let digits = |part: &str, radix: u32| -> Result<Vec<u8>> {
            part.trim()
                .chars()
                .map(|c| {
                    c.to_digit(radix)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Parse(format!("bad parameter digit {c:?}")))
                })
                .collect()
        };
        CircuitParams::new(digits(alpha, 2)?, digits(beta, 3)?)
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Clifford gates used by the preparation and measurement circuits.
/// `Gamma1 = H·Z·S` and `Gamma2 = S·H` (rightmost factor acts first).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    Z(usize),
    X(usize),
    Cnot(usize, usize),
    Gamma1(usize),
    Gamma2(usize),
}

impl Gate {
    /// Decomposition into `H`, `S`, `Z`, `X`, `CNOT`, in time order.
    pub fn primitives(self) -> Vec<Gate> {
        match self {
            Gate::Gamma1(q) => vec![Gate::S(q), Gate::Z(q), Gate::H(q)],
            Gate::Gamma2(q) => vec![Gate::H(q), Gate::S(q)],
            g => vec![g],
        }
    }
}

/// Basis rotation index that turns a measurement of `letter` into a `Z`
/// measurement (`Γ(0)` for `Z`, `Γ(1)` for `Y`, `Γ(2)` for `X`).
pub fn readout_beta(letter: Letter) -> u8 {
    match letter {
        Letter::Z => 0,
        Letter::Y => 1,
        Letter::X => 2,
    }
}

const QASM_HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n\
gate gamma1 a { s a; z a; h a; }\n\
gate gamma2 a { h a; s a; }\n";

fn gate_line(g: Gate, out: &mut String) {
    let _ = match g {
        Gate::H(q) => writeln!(out, "h q[{q}];"),
        Gate::S(q) => writeln!(out, "s q[{q}];"),
        Gate::Z(q) => writeln!(out, "z q[{q}];"),
        Gate::X(q) => writeln!(out, "x q[{q}];"),
        Gate::Cnot(c, t) => writeln!(out, "cx q[{c}],q[{t}];"),
        Gate::Gamma1(q) => writeln!(out, "gamma1 q[{q}];"),
        Gate::Gamma2(q) => writeln!(out, "gamma2 q[{q}];"),
    };
}

/// OpenQASM-style listing of the preparation circuit, optionally followed by
/// the ancilla-parity readout of `measure`.
pub fn emit_qasm(params: &CircuitParams, measure: Option<&PauliWord>) -> Result<String> {
    let n = params.qubits();
    let mut out = String::from(QASM_HEADER);
    let _ = writeln!(out, "qreg q[{n}];");
    if let Some(obs) = measure {
        if obs.len() != n {
            return Err(usage(format!(
                "observable {obs} has {} qubits, circuit has {n}",
                obs.len()
            )));
        }
        out.push_str("qreg anc[1];\ncreg c[1];\n");
    }
    for g in params.preparation() {
        gate_line(g, &mut out);
    }
    if let Some(obs) = measure {
        for q in 0..n {
            match readout_beta(obs.letter(q)) {
                0 => {
                    let _ = writeln!(out, "id q[{q}];");
                }
                1 => gate_line(Gate::Gamma1(q), &mut out),
                _ => gate_line(Gate::Gamma2(q), &mut out),
            }
        }
        for q in 0..n {
            let _ = writeln!(out, "cx q[{q}],anc[0];");
        }
        out.push_str("measure anc[0] -> c[0];\n");
    }
    Ok(out)
}
