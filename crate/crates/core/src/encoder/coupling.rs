//! Pairing of observables into data bits and the sign patterns that encode
//! a bitstring.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::pauli::word_count;

/// Largest register for which couplings are materialized.
pub const MAX_CODEC_QUBITS: usize = 12;

/// Number of data bits stored at `n` qubits, `(3^n - 1) / 2`.
pub fn data_len(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_CODEC_QUBITS {
        return Err(Error::Resource(format!(
            "codec supports 1..={MAX_CODEC_QUBITS} qubits (got {n})"
        )));
    }
    Ok(((word_count(n)? - 1) / 2) as usize)
}

/// Ordered observable couples plus one uncoupled observable.
///
/// `order` lists every observable index once: couple `l` is
/// `(order[2l], order[2l+1])` and the last entry is the uncoupled one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingScheme {
    n: usize,
    order: Vec<u32>,
}

impl CouplingScheme {
    /// Alphabetical couples `(0,1), (2,3), ...`, leaving `Z...Z` uncoupled.
    pub fn alphabetical(n: usize) -> Result<Self> {
        data_len(n)?;
        let total = word_count(n)? as u32;
        Ok(CouplingScheme {
            n,
            order: (0..total).collect(),
        })
    }

    /// Seeded random ordering, never equal to the alphabetical one.
    pub fn shuffled<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut scheme = CouplingScheme::alphabetical(n)?;
        let identity = scheme.order.clone();
        loop {
            scheme.order.shuffle(rng);
            if scheme.order != identity {
                return Ok(scheme);
            }
        }
    }

    pub fn from_order(n: usize, order: Vec<u32>) -> Result<Self> {
        let total = word_count(n)? as usize;
        data_len(n)?;
        if order.len() != total {
            return Err(usage(format!(
                "coupling order has {} entries, expected {total}",
                order.len()
            )));
        }
        let mut seen = vec![false; total];
        for &o in &order {
            let slot = seen
                .get_mut(o as usize)
                .ok_or_else(|| usage(format!("observable index {o} out of range")))?;
            if std::mem::replace(slot, true) {
                return Err(usage(format!("observable index {o} repeated")));
            }
        }
        Ok(CouplingScheme { n, order })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn is_alphabetical(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &o)| i as u32 == o)
    }

    /// Number of couples, equal to the data length.
    pub fn len(&self) -> usize {
        self.order.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn couple(&self, l: usize) -> (usize, usize) {
        (self.order[2 * l] as usize, self.order[2 * l + 1] as usize)
    }

    pub fn uncoupled(&self) -> usize {
        *self.order.last().expect("nonempty") as usize
    }

    /// Couple index and slot (0 or 1) of every observable; `None` for the
    /// uncoupled one.
    pub fn positions(&self) -> Vec<Option<(usize, u8)>> {
        let mut pos = vec![None; self.order.len()];
        for l in 0..self.len() {
            let (a, b) = self.couple(l);
            pos[a] = Some((l, 0));
            pos[b] = Some((l, 1));
        }
        pos
    }
}

/// Preferred `±1` parity of every observable. The uncoupled observable's
/// sign is a free choice and is ignored when decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityConfiguration {
    signs: Vec<i8>,
    wildcard: usize,
}

impl ParityConfiguration {
    /// Encodes `data` with per-couple `choice` bits: for bit 0 the couple is
    /// `(+,+)` or, when the choice bit is set, `(-,-)`; for bit 1 it is
    /// `(+,-)` or `(-,+)`. The wildcard gets `wildcard_sign`.
    pub fn encode(
        scheme: &CouplingScheme,
        data: &[bool],
        choice: &[bool],
        wildcard_sign: i8,
    ) -> Result<Self> {
        let m = scheme.len();
        if data.len() != m || choice.len() != m {
            return Err(usage(format!(
                "data and choice must have {m} bits (got {} and {})",
                data.len(),
                choice.len()
            )));
        }
        let mut signs = vec![1i8; scheme.order.len()];
        for l in 0..m {
            let (a, b) = scheme.couple(l);
            let first = if choice[l] { -1 } else { 1 };
            signs[a] = first;
            signs[b] = if data[l] { -first } else { first };
        }
        let wildcard = scheme.uncoupled();
        signs[wildcard] = if wildcard_sign < 0 { -1 } else { 1 };
        Ok(ParityConfiguration { signs, wildcard })
    }

    pub fn from_signs(scheme: &CouplingScheme, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != scheme.order.len() {
            return Err(usage(format!(
                "expected {} signs, got {}",
                scheme.order.len(),
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(usage("signs must be +1 or -1"));
        }
        Ok(ParityConfiguration {
            signs,
            wildcard: scheme.uncoupled(),
        })
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, obs: usize) -> i8 {
        self.signs[obs]
    }

    pub fn wildcard(&self) -> usize {
        self.wildcard
    }

    pub fn with_wildcard_sign(mut self, sign: i8) -> Self {
        self.signs[self.wildcard] = if sign < 0 { -1 } else { 1 };
        self
    }

    /// Data bits: 0 where a couple agrees, 1 where it differs.
    pub fn decode(&self, scheme: &CouplingScheme) -> Vec<bool> {
        (0..scheme.len())
            .map(|l| {
                let (a, b) = scheme.couple(l);
                self.signs[a] != self.signs[b]
            })
            .collect()
    }

    /// Choice bits that reproduce this configuration with [`Self::encode`].
    pub fn choice(&self, scheme: &CouplingScheme) -> Vec<bool> {
        (0..scheme.len())
            .map(|l| self.signs[scheme.couple(l).0] < 0)
            .collect()
    }

    /// `+`/`-` string in observable order.
    pub fn to_sign_string(&self) -> String {
        self.signs
            .iter()
            .map(|&s| if s > 0 { '+' } else { '-' })
            .collect()
    }

    pub fn parse_sign_string(scheme: &CouplingScheme, text: &str) -> Result<Self> {
        let signs = text
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::Parse(format!("bad sign character {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        ParityConfiguration::from_signs(scheme, signs).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn alphabetical_layout() {
        let s = CouplingScheme::alphabetical(4).unwrap();
        assert_eq!(s.len(), 40);
        assert_eq!(s.couple(0), (0, 1));
        assert_eq!(s.couple(39), (78, 79));
        assert_eq!(s.uncoupled(), 80);
        assert!(s.is_alphabetical());
    }

    #[test]
    fn magic_square_example_signs() {
        // XX+ XY+ XZ+ YX+ YY- YZ+ ZX- ZY- ZZ+ stores 0010.
        let s = CouplingScheme::alphabetical(2).unwrap();
        let data = [false, false, true, false];
        let cfg = ParityConfiguration::encode(&s, &data, &[false, false, true, true], 1).unwrap();
        assert_eq!(cfg.to_sign_string(), "++++-+--+");
        assert_eq!(cfg.decode(&s), data);
    }

    #[test]
    fn choice_round_trip() {
        let s = CouplingScheme::alphabetical(2).unwrap();
        let cfg = ParityConfiguration::encode(&s, &[true, false, true, true], &[true, true, false, false], -1)
            .unwrap();
        assert_eq!(cfg.choice(&s), vec![true, true, false, false]);
        let text = cfg.to_sign_string();
        assert_eq!(ParityConfiguration::parse_sign_string(&s, &text).unwrap(), cfg);
    }

    #[test]
    fn shuffled_is_a_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = CouplingScheme::shuffled(2, &mut rng).unwrap();
        assert!(!s.is_alphabetical());
        assert!(CouplingScheme::from_order(2, s.order().to_vec()).is_ok());
        assert!(CouplingScheme::from_order(2, vec![0, 0, 1, 2, 3, 4, 5, 6, 7]).is_err());
        assert!(CouplingScheme::from_order(2, vec![0, 1]).is_err());
    }

    #[test]
    fn length_errors() {
        let s = CouplingScheme::alphabetical(2).unwrap();
        assert!(ParityConfiguration::encode(&s, &[true], &[false; 4], 1).is_err());
        assert!(ParityConfiguration::parse_sign_string(&s, "++").is_err());
        assert!(ParityConfiguration::parse_sign_string(&s, "++--+--x+").is_err());
    }
}
