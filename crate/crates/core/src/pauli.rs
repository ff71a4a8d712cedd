//! Exact arithmetic on n-qubit Pauli operators.
//!
//! Two representations live here. [`PauliWord`] is a full-weight observable
//! from `{X, Y, Z}^n`, which is the only kind of observable the code ever
//! measures. [`GeneralPauli`] is any element of the Pauli group, with an
//! explicit `i^k` phase, and is what products of observables and stabilizer
//! generators are made of.
//!
//! Both use the symplectic two-mask layout: bit `q` of `x` / `z` refers to
//! qubit `q` (qubit 0 is the leftmost letter). `Y` sets both bits and is the
//! genuine Hermitian `Y`, not `XZ`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};

/// Largest qubit count representable by the mask layout.
pub const MAX_QUBITS: usize = 32;

/// Single-qubit Pauli letter. Declaration order is alphabetical, which is
/// also the base-3 digit value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    pub fn digit(self) -> u64 {
        self as u64
    }

    pub fn from_digit(d: u64) -> Option<Letter> {
        match d {
            0 => Some(Letter::X),
            1 => Some(Letter::Y),
            2 => Some(Letter::Z),
            _ => None,
        }
    }

    /// `(x, z)` bits of the letter.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Option<Letter> {
        match (x, z) {
            (true, false) => Some(Letter::X),
            (true, true) => Some(Letter::Y),
            (false, true) => Some(Letter::Z),
            (false, false) => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    /// Cyclic relabelling `X -> Y -> Z -> X`.
    pub fn cycle(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::Z,
            Letter::Z => Letter::X,
        }
    }

    /// Inverse of [`Letter::cycle`].
    pub fn cycle_back(self) -> Letter {
        match self {
            Letter::X => Letter::Z,
            Letter::Y => Letter::X,
            Letter::Z => Letter::Y,
        }
    }
}

impl TryFrom<char> for Letter {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'X' | 'x' => Ok(Letter::X),
            'Y' | 'y' => Ok(Letter::Y),
            'Z' | 'z' => Ok(Letter::Z),
            other => Err(Error::Parse(format!("not a Pauli letter: {other:?}"))),
        }
    }
}

fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(usage("qubit count must be positive"));
    }
    if n > MAX_QUBITS {
        return Err(Error::Resource(format!(
            "{n} qubits exceeds the supported maximum of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Number of full-weight words on `n` qubits, `3^n`.
pub fn word_count(n: usize) -> Result<u64> {
    check_qubits(n)?;
    Ok(3u64.pow(n as u32))
}

/// Anything with a symplectic `(x, z)` mask pair.
pub trait Symplectic {
    fn qubits(&self) -> usize;
    fn x_mask(&self) -> u64;
    fn z_mask(&self) -> u64;

    /// Bitwise commutation test without the size check.
    fn commutes_bits(&self, other: &impl Symplectic) -> bool {
        let overlap = (self.x_mask() & other.z_mask()) ^ (self.z_mask() & other.x_mask());
        overlap.count_ones().is_multiple_of(2)
    }
}

/// Commutation test with a size check. Two Paulis commute iff the number of
/// positions where both act non-trivially with different letters is even.
pub fn commutes(a: &impl Symplectic, b: &impl Symplectic) -> Result<bool> {
    if a.qubits() != b.qubits() {
        return Err(usage(format!(
            "cannot compare Paulis on {} and {} qubits",
            a.qubits(),
            b.qubits()
        )));
    }
    Ok(a.commutes_bits(b))
}

/// A full-weight n-qubit Pauli observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliWord {
    pub fn new(letters: &[Letter]) -> Result<Self> {
        check_qubits(letters.len())?;
        let mut x = 0;
        let mut z = 0;
        for (q, letter) in letters.iter().enumerate() {
            let (bx, bz) = letter.bits();
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        Ok(PauliWord {
            n: letters.len(),
            x,
            z,
        })
    }

    /// The same letter on every qubit.
    pub fn uniform(n: usize, letter: Letter) -> Result<Self> {
        PauliWord::new(&vec![letter; n])
    }

    /// Word with canonical base-3 index `index` (qubit 0 most significant).
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        let total = word_count(n)?;
        if index >= total {
            return Err(usage(format!(
                "index {index} out of range for {n} qubits (< {total})"
            )));
        }
        let mut letters = vec![Letter::X; n];
        let mut rest = index;
        for q in (0..n).rev() {
            letters[q] = Letter::from_digit(rest % 3).expect("digit < 3");
            rest /= 3;
        }
        PauliWord::new(&letters)
    }

    pub fn index(&self) -> u64 {
        (0..self.n).fold(0, |acc, q| acc * 3 + self.letter(q).digit())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn letter(&self, q: usize) -> Letter {
        assert!(q < self.n, "qubit {q} out of range");
        Letter::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1).expect("full weight")
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    /// Number of positions where the two words carry different letters.
    pub fn hamming(&self, other: &PauliWord) -> u32 {
        ((self.x ^ other.x) | (self.z ^ other.z)).count_ones()
    }

    /// True when the words differ at every position.
    pub fn shares_no_letter(&self, other: &PauliWord) -> bool {
        self.n == other.n && self.hamming(other) as usize == self.n
    }

    pub fn count(&self, letter: Letter) -> usize {
        let mask = low_mask(self.n);
        let bits = match letter {
            Letter::X => self.x & !self.z,
            Letter::Y => self.x & self.z,
            Letter::Z => !self.x & self.z,
        };
        (bits & mask).count_ones() as usize
    }

    /// All `3^n` words in alphabetical order.
    pub fn all(n: usize) -> Result<impl Iterator<Item = PauliWord>> {
        let total = word_count(n)?;
        Ok((0..total).map(move |i| PauliWord::from_index(n, i).expect("in range")))
    }

    pub fn to_general(&self) -> GeneralPauli {
        GeneralPauli {
            n: self.n,
            x: self.x,
            z: self.z,
            phase: Phase::ONE,
        }
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &PauliWord) -> Result<PauliWord> {
        let mut letters = self.letters();
        letters.extend(other.letters());
        PauliWord::new(&letters)
    }
}

impl Symplectic for PauliWord {
    fn qubits(&self) -> usize {
        self.n
    }
    fn x_mask(&self) -> u64 {
        self.x
    }
    fn z_mask(&self) -> u64 {
        self.z
    }
}

impl Ord for PauliWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.letters().cmp(&other.letters()))
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    /// Parses `"XZZY"`. Surrounding whitespace is ignored; `I` is rejected
    /// since code observables are full weight.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty Pauli word".into()));
        }
        if s.chars().count() > MAX_QUBITS {
            return Err(Error::Parse(format!(
                "Pauli word longer than {MAX_QUBITS} letters"
            )));
        }
        let letters = s
            .chars()
            .map(Letter::try_from)
            .collect::<Result<Vec<_>>>()?;
        PauliWord::new(&letters)
    }
}

impl Serialize for PauliWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Global phase `i^k`, `k` taken mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Phase {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `+1` or `-1` for real phases.
    pub fn sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl std::ops::Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        self * Phase::MINUS_ONE
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })
    }
}

/// An element of the n-qubit Pauli group: `i^k · P_0 ⊗ ... ⊗ P_{n-1}` with
/// `P_q ∈ {I, X, Y, Z}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneralPauli {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

impl GeneralPauli {
    pub fn identity(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(GeneralPauli {
            n,
            x: 0,
            z: 0,
            phase: Phase::ONE,
        })
    }

    pub fn from_masks(n: usize, x: u64, z: u64, phase: Phase) -> Result<Self> {
        check_qubits(n)?;
        let mask = low_mask(n);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(usage("mask bits set beyond the qubit count"));
        }
        Ok(GeneralPauli { n, x, z, phase })
    }

    /// Single-qubit operator `letter` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, letter: Letter) -> Result<Self> {
        check_qubits(n)?;
        if qubit >= n {
            return Err(usage(format!("qubit {qubit} out of range for {n} qubits")));
        }
        let (bx, bz) = letter.bits();
        Ok(GeneralPauli {
            n,
            x: (bx as u64) << qubit,
            z: (bz as u64) << qubit,
            phase: Phase::ONE,
        })
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Letter on `qubit`, `None` for identity.
    pub fn letter(&self, qubit: usize) -> Option<Letter> {
        Letter::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    /// The full-weight word this operator is proportional to, if any.
    pub fn as_word(&self) -> Option<PauliWord> {
        if self.weight() != self.n {
            return None;
        }
        Some(PauliWord {
            n: self.n,
            x: self.x,
            z: self.z,
        })
    }

    /// Exact product `self · rhs` with tracked phase.
    pub fn multiply(&self, rhs: &GeneralPauli) -> Result<GeneralPauli> {
        if self.n != rhs.n {
            return Err(usage(format!(
                "cannot multiply Paulis on {} and {} qubits",
                self.n, rhs.n
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &GeneralPauli) -> GeneralPauli {
        let (xa, ya, za) = split_letters(self.x, self.z);
        let (xb, yb, zb) = split_letters(rhs.x, rhs.z);
        // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
        let forward = ((xa & yb) | (ya & zb) | (za & xb)).count_ones();
        let backward = ((ya & xb) | (za & yb) | (xa & zb)).count_ones();
        let k = self.phase.0 as u32 + rhs.phase.0 as u32 + forward + 3 * backward;
        GeneralPauli {
            n: self.n,
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
            phase: Phase::from_exponent(k),
        }
    }

    pub(crate) fn flip_sign(&mut self) {
        self.phase = -self.phase;
    }

    pub(crate) fn masks_mut(&mut self) -> (&mut u64, &mut u64) {
        (&mut self.x, &mut self.z)
    }

    /// Packed symplectic key `x | z << n`, used for elimination.
    pub(crate) fn key(&self) -> u64 {
        self.x | (self.z << self.n)
    }
}

fn split_letters(x: u64, z: u64) -> (u64, u64, u64) {
    (x & !z, x & z, !x & z)
}

impl Symplectic for GeneralPauli {
    fn qubits(&self) -> usize {
        self.n
    }
    fn x_mask(&self) -> u64 {
        self.x
    }
    fn z_mask(&self) -> u64 {
        self.z
    }
}

impl From<PauliWord> for GeneralPauli {
    fn from(w: PauliWord) -> Self {
        w.to_general()
    }
}

impl fmt::Display for GeneralPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase)?;
        for q in 0..self.n {
            let c = self.letter(q).map_or('I', Letter::as_char);
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneralPauli {
    type Err = Error;

    /// Parses an optional phase prefix (`+`, `-`, `+i`, `-i`, `i`) followed by
    /// letters from `IXYZ`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("+i").or(s.strip_prefix("i")) {
            (Phase::I, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (Phase::MINUS_I, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (Phase::ONE, rest)
        } else {
            (Phase::ONE, s)
        };
        let n = body.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Parse(format!("bad Pauli operator length {n}")));
        }
        let mut x = 0;
        let mut z = 0;
        for (q, c) in body.chars().enumerate() {
            if c == 'I' {
                continue;
            }
            let (bx, bz) = Letter::try_from(c)?.bits();
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        GeneralPauli::from_masks(n, x, z, phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    fn g(s: &str) -> GeneralPauli {
        s.parse().unwrap()
    }

    #[test]
    fn commutation_examples() {
        assert!(commutes(&w("XX"), &w("YY")).unwrap());
        assert!(!commutes(&w("XY"), &w("XZ")).unwrap());
        assert!(commutes(&w("ZZZZ"), &w("XYXY")).unwrap());
        assert!(matches!(
            commutes(&w("XX"), &w("XXX")),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn products() {
        assert_eq!(g("X").multiply(&g("Y")).unwrap(), g("+iZ"));
        assert_eq!(g("Y").multiply(&g("X")).unwrap(), g("-iZ"));
        assert_eq!(g("XX").multiply(&g("YY")).unwrap(), g("-ZZ"));
        let p = g("-iXYZI");
        assert!(p.multiply(&p).unwrap().is_identity());
        assert_eq!(p.multiply(&p).unwrap().phase(), Phase::MINUS_ONE);
        assert!(g("X").multiply(&g("XX")).is_err());
    }

    #[test]
    fn index_conversions() {
        assert_eq!(PauliWord::from_index(2, 0).unwrap(), w("XX"));
        assert_eq!(PauliWord::from_index(2, 8).unwrap(), w("ZZ"));
        assert_eq!(PauliWord::from_index(2, 5).unwrap(), w("YZ"));
        assert!(PauliWord::from_index(2, 9).is_err());
        assert_eq!(w("ZXXZ").index(), 2 * 27 + 2);
    }

    #[test]
    fn parse_rejects_identity_and_garbage() {
        assert!("XIZ".parse::<PauliWord>().is_err());
        assert!("".parse::<PauliWord>().is_err());
        assert!("XQ".parse::<PauliWord>().is_err());
        assert_eq!(" xyz ".parse::<PauliWord>().unwrap(), w("XYZ"));
    }

    #[test]
    fn letter_counts() {
        let word = w("XXYZZZ");
        assert_eq!(word.count(Letter::X), 2);
        assert_eq!(word.count(Letter::Y), 1);
        assert_eq!(word.count(Letter::Z), 3);
        assert!(w("XYZ").shares_no_letter(&w("YZX")));
        assert!(!w("XYZ").shares_no_letter(&w("YYX")));
    }

    #[test]
    fn display_round_trip() {
        for s in ["+XIZ", "-iYYI", "+iIIX", "-ZZZZ"] {
            assert_eq!(g(s).to_string(), s);
        }
    }
}
