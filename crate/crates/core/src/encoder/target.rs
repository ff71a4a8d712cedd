//! Stage one: pick the sign pattern compatible with the data that looks most
//! like a collection of context eigenstates.

use rand::Rng;

use crate::error::{usage, Result};

use super::catalog::EigenCatalog;
use super::coupling::{CouplingScheme, ParityConfiguration};

/// Reward for eigenstates at Hamming distance 0, 1 and 2 from the target.
pub const DISTANCE_WEIGHTS: [u64; 3] = [100, 10, 1];

/// `sum_i w_i M_i`, where `M_i` counts eigenstates whose eigenvalues differ
/// from `config` on exactly `i` context members. The uncoupled observable is
/// left out of every distance.
pub fn score_target(config: &ParityConfiguration, catalog: &EigenCatalog) -> u64 {
    catalog
        .states()
        .iter()
        .map(|s| {
            let d = s
                .eigenvalues
                .iter()
                .filter(|&&(o, v)| o as usize != config.wildcard() && config.sign(o as usize) != v)
                .count();
            DISTANCE_WEIGHTS.get(d).copied().unwrap_or(0)
        })
        .sum()
}

/// Incrementally maintained score over choice-bit flips.
struct Scorer<'a> {
    catalog: &'a EigenCatalog,
    scheme: &'a CouplingScheme,
    signs: Vec<i8>,
    distance: Vec<u16>,
    score: u64,
}

fn weight(d: u16) -> u64 {
    DISTANCE_WEIGHTS.get(d as usize).copied().unwrap_or(0)
}

impl<'a> Scorer<'a> {
    fn new(catalog: &'a EigenCatalog, scheme: &'a CouplingScheme, config: &ParityConfiguration) -> Self {
        let wildcard = config.wildcard();
        let distance: Vec<u16> = catalog
            .states()
            .iter()
            .map(|s| {
                s.eigenvalues
                    .iter()
                    .filter(|&&(o, v)| o as usize != wildcard && config.sign(o as usize) != v)
                    .count() as u16
            })
            .collect();
        let score = distance.iter().map(|&d| weight(d)).sum();
        Scorer {
            catalog,
            scheme,
            signs: config.signs().to_vec(),
            distance,
            score,
        }
    }

    /// Flips choice bit `l` (both signs of couple `l`).
    fn flip(&mut self, l: usize) {
        let (a, b) = self.scheme.couple(l);
        for obs in [a, b] {
            self.signs[obs] = -self.signs[obs];
            for &i in self.catalog.observable_states(obs) {
                let value = self.catalog.states()[i]
                    .eigenvalues
                    .iter()
                    .find(|&&(o, _)| o as usize == obs)
                    .map(|&(_, v)| v)
                    .expect("indexed state contains observable");
                let old = self.distance[i];
                let new = if value == self.signs[obs] { old - 1 } else { old + 1 };
                self.distance[i] = new;
                self.score = self.score - weight(old) + weight(new);
            }
        }
    }
}

/// Result of the stage-one search.
#[derive(Clone, Debug)]
pub struct TargetSearch {
    pub config: ParityConfiguration,
    pub score: u64,
    pub initial_score: u64,
    pub accepted: u64,
}

/// Hill-climbs the per-couple choice bits with single random flips,
/// keeping a flip whenever the score does not drop. Starts from a random
/// choice. The result always decodes to `data`.
pub fn optimize_target<R: Rng + ?Sized>(
    data: &[bool],
    scheme: &CouplingScheme,
    catalog: &EigenCatalog,
    iterations: u64,
    rng: &mut R,
) -> Result<TargetSearch> {
    if catalog.qubits() != scheme.qubits() {
        return Err(usage("catalog and coupling scheme sizes differ"));
    }
    let m = scheme.len();
    let choice: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
    let start = ParityConfiguration::encode(scheme, data, &choice, 1)?;
    let mut scorer = Scorer::new(catalog, scheme, &start);
    let initial_score = scorer.score;
    let mut accepted = 0;
    for _ in 0..iterations {
        let l = rng.gen_range(0..m);
        let before = scorer.score;
        scorer.flip(l);
        if scorer.score < before {
            scorer.flip(l);
        } else {
            accepted += 1;
        }
    }
    let config = ParityConfiguration::from_signs(scheme, scorer.signs)?;
    debug_assert_eq!(config.decode(scheme), data);
    Ok(TargetSearch {
        score: scorer.score,
        config,
        initial_score,
        accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::MagicSquare;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn incremental_score_matches_direct() {
        let cat = EigenCatalog::build(2).unwrap();
        let scheme = CouplingScheme::alphabetical(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let data: Vec<bool> = (0..4).map(|_| rng.gen()).collect();
            let found = optimize_target(&data, &scheme, &cat, 50, &mut rng).unwrap();
            assert_eq!(found.score, score_target(&found.config, &cat));
            assert!(found.score >= found.initial_score);
            assert_eq!(found.config.decode(&scheme), data);
        }
    }

    #[test]
    fn wildcard_sign_does_not_matter() {
        let cat = EigenCatalog::build(2).unwrap();
        let scheme = CouplingScheme::alphabetical(2).unwrap();
        let cfg = ParityConfiguration::encode(&scheme, &[false, false, true, false], &[false; 4], 1).unwrap();
        let flipped = cfg.clone().with_wildcard_sign(-1);
        assert_eq!(score_target(&cfg, &cat), score_target(&flipped, &cat));
    }

    #[test]
    fn data_0010_reaches_five_restrictions() {
        let cat = EigenCatalog::build(2).unwrap();
        let scheme = CouplingScheme::alphabetical(2).unwrap();
        let data = [false, false, true, false];
        let square = MagicSquare::new();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let found = optimize_target(&data, &scheme, &cat, 200, &mut rng).unwrap();
        let best = [1i8, -1]
            .iter()
            .map(|&w| {
                let signs: [i8; 9] = found.config.clone().with_wildcard_sign(w).signs().try_into().unwrap();
                square.label(&signs).restrictions
            })
            .max()
            .unwrap();
        assert_eq!(best, 5);
    }
}
