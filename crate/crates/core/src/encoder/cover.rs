//! Encoding from exact covers: partitions of all observables into catalog
//! contexts. With one eigenstate per context every observable gets exactly
//! one deterministic vote, so the only possible losses are couples whose
//! eigenvalue product disagrees with the data bit.

use crate::error::{usage, Error, Result};
use crate::pauli::word_count;

use super::catalog::EigenCatalog;
use super::coupling::{CouplingScheme, ParityConfiguration};

/// Default bound on the number of covers enumerated.
pub const DEFAULT_COVER_LIMIT: usize = 4096;

/// Sets of catalog contexts partitioning the observables, at most `limit` of
/// them, in a deterministic order.
pub fn exact_covers(catalog: &EigenCatalog, limit: usize) -> Result<Vec<Vec<usize>>> {
    let total = word_count(catalog.qubits())? as usize;
    let contexts = catalog.contexts();
    let mut by_observable = vec![Vec::new(); total];
    for (c, members) in contexts.iter().enumerate() {
        for &o in members {
            by_observable[o as usize].push(c);
        }
    }
    let mut search = CoverSearch {
        contexts,
        by_observable: &by_observable,
        covered: vec![false; total],
        chosen: Vec::new(),
        found: Vec::new(),
        limit,
    };
    search.run();
    Ok(search.found)
}

struct CoverSearch<'a> {
    contexts: &'a [Vec<u32>],
    by_observable: &'a [Vec<usize>],
    covered: Vec<bool>,
    chosen: Vec<usize>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl CoverSearch<'_> {
    fn fits(&self, c: usize) -> bool {
        self.contexts[c].iter().all(|&o| !self.covered[o as usize])
    }

    fn set(&mut self, c: usize, value: bool) {
        for &o in &self.contexts[c] {
            self.covered[o as usize] = value;
        }
    }

    fn run(&mut self) {
        if self.found.len() >= self.limit {
            return;
        }
        // Branch on the uncovered observable with the fewest fitting contexts.
        let mut pick: Option<Vec<usize>> = None;
        for o in 0..self.covered.len() {
            if self.covered[o] {
                continue;
            }
            let options: Vec<usize> = self.by_observable[o]
                .iter()
                .copied()
                .filter(|&c| self.fits(c))
                .collect();
            if options.is_empty() {
                return;
            }
            if pick.as_ref().is_none_or(|p| options.len() < p.len()) {
                pick = Some(options);
            }
        }
        let Some(options) = pick else {
            let mut cover = self.chosen.clone();
            cover.sort_unstable();
            self.found.push(cover);
            return;
        };
        for c in options {
            self.set(c, true);
            self.chosen.push(c);
            self.run();
            self.chosen.pop();
            self.set(c, false);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

/// One eigenstate per context of a cover, chosen to break as few couples
/// as possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverAssignment {
    /// Catalog positions, one per cover context.
    pub states: Vec<usize>,
    /// Couples whose eigenvalue product contradicts the data.
    pub violations: usize,
}

/// Exact branch and bound over the eigenstates of each cover context.
pub fn assign_cover(
    catalog: &EigenCatalog,
    scheme: &CouplingScheme,
    data: &[bool],
    cover: &[usize],
) -> Result<CoverAssignment> {
    if data.len() != scheme.len() {
        return Err(usage("data length does not match the coupling"));
    }
    let total = word_count(catalog.qubits())? as usize;
    let mut slot = vec![usize::MAX; total];
    for (k, &c) in cover.iter().enumerate() {
        for &o in &catalog.contexts()[c] {
            if slot[o as usize] != usize::MAX {
                return Err(usage("cover contexts overlap"));
            }
            slot[o as usize] = k;
        }
    }
    if slot.contains(&usize::MAX) {
        return Err(usage("contexts do not cover every observable"));
    }
    // Couples are checked at the depth where their later endpoint is fixed.
    let mut closing = vec![Vec::new(); cover.len()];
    for l in 0..scheme.len() {
        let (a, b) = scheme.couple(l);
        closing[slot[a].max(slot[b])].push((a, b, data[l]));
    }
    // Eigenvalue of every observable in each candidate state, by observable.
    let candidates: Vec<Vec<(usize, Vec<i8>)>> = cover
        .iter()
        .map(|&c| {
            catalog
                .context_states(c)
                .iter()
                .map(|&i| {
                    let mut values = vec![0i8; total];
                    for &(o, v) in &catalog.states()[i].eigenvalues {
                        values[o as usize] = v;
                    }
                    (i, values)
                })
                .collect()
        })
        .collect();

    struct Bnb<'a> {
        candidates: &'a [Vec<(usize, Vec<i8>)>],
        closing: &'a [Vec<(usize, usize, bool)>],
        slot: &'a [usize],
        picks: Vec<usize>,
        best: Option<(usize, Vec<usize>)>,
    }
    impl Bnb<'_> {
        fn value(&self, o: usize) -> i8 {
            let k = self.slot[o];
            self.candidates[k][self.picks[k]].1[o]
        }
        fn go(&mut self, depth: usize, violations: usize) {
            if self.best.as_ref().is_some_and(|b| violations >= b.0) {
                return;
            }
            if depth == self.candidates.len() {
                let states = self
                    .picks
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| self.candidates[k][p].0)
                    .collect();
                self.best = Some((violations, states));
                return;
            }
            for p in 0..self.candidates[depth].len() {
                self.picks.push(p);
                let broken = self.closing[depth]
                    .iter()
                    .filter(|&&(a, b, bit)| (self.value(a) != self.value(b)) != bit)
                    .count();
                self.go(depth + 1, violations + broken);
                self.picks.pop();
                if self.best.as_ref().is_some_and(|b| b.0 == 0) {
                    return;
                }
            }
        }
    }
    let mut bnb = Bnb {
        candidates: &candidates,
        closing: &closing,
        slot: &slot,
        picks: Vec::with_capacity(cover.len()),
        best: None,
    };
    bnb.go(0, 0);
    let (violations, states) = bnb
        .best
        .ok_or_else(|| Error::Unsupported("cover context without eigenstates".into()))?;
    Ok(CoverAssignment { states, violations })
}

/// Target signs agreeing with the first member of every couple and with the
/// uncoupled observable. Only the second member of a broken couple
/// disagrees with its state.
pub fn cover_target(
    catalog: &EigenCatalog,
    scheme: &CouplingScheme,
    data: &[bool],
    states: &[usize],
) -> Result<ParityConfiguration> {
    let total = word_count(catalog.qubits())? as usize;
    let mut sign = vec![1i8; total];
    for &i in states {
        for &(o, v) in &catalog.states()[i].eigenvalues {
            sign[o as usize] = v;
        }
    }
    let choice: Vec<bool> = (0..scheme.len()).map(|l| sign[scheme.couple(l).0] < 0).collect();
    ParityConfiguration::encode(scheme, data, &choice, sign[scheme.uncoupled()])
}

/// Majority tallies against a fixed target, kept incrementally.
pub(crate) struct Tally<'a> {
    catalog: &'a EigenCatalog,
    target: &'a ParityConfiguration,
    toward: Vec<i32>,
    against: Vec<i32>,
}

impl<'a> Tally<'a> {
    pub(crate) fn new(catalog: &'a EigenCatalog, target: &'a ParityConfiguration) -> Self {
        let total = target.signs().len();
        Tally {
            catalog,
            target,
            toward: vec![0; total],
            against: vec![0; total],
        }
    }

    pub(crate) fn add(&mut self, state: usize, delta: i32) {
        for &(o, v) in &self.catalog.states()[state].eigenvalues {
            let o = o as usize;
            if v == self.target.sign(o) {
                self.toward[o] += delta;
            } else {
                self.against[o] += delta;
            }
        }
    }

    /// Observables matched: coupled ones whose majority is the target, plus
    /// the uncoupled one when it has any preference.
    pub(crate) fn matched(&self) -> usize {
        let w = self.target.wildcard();
        (0..self.toward.len())
            .filter(|&o| {
                if o == w {
                    self.toward[o] != self.against[o]
                } else {
                    self.toward[o] > self.against[o]
                }
            })
            .count()
    }

    /// Sum of vote margins, used to break ties between equal match counts.
    pub(crate) fn margin(&self) -> i64 {
        let w = self.target.wildcard();
        (0..self.toward.len())
            .filter(|&o| o != w)
            .map(|o| (self.toward[o] - self.against[o]).min(2) as i64)
            .sum()
    }
}

/// Greedily grows `states` to `size` distinct eigenstates, each step adding
/// the one that keeps the most observables matched.
pub fn extend_selection(
    catalog: &EigenCatalog,
    target: &ParityConfiguration,
    states: &[usize],
    size: usize,
) -> Vec<usize> {
    let mut chosen = states.to_vec();
    let mut tally = Tally::new(catalog, target);
    for &i in &chosen {
        tally.add(i, 1);
    }
    while chosen.len() < size {
        let mut best: Option<((usize, i64), usize)> = None;
        for i in 0..catalog.len() {
            if chosen.contains(&i) {
                continue;
            }
            tally.add(i, 1);
            let key = (tally.matched(), tally.margin());
            tally.add(i, -1);
            if best.is_none_or(|(k, _)| key > k) {
                best = Some((key, i));
            }
        }
        let Some((_, i)) = best else { break };
        tally.add(i, 1);
        chosen.push(i);
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn magic_square_covers() {
        let cat = EigenCatalog::build(2).unwrap();
        let covers = exact_covers(&cat, usize::MAX).unwrap();
        // The three rows and the three columns.
        assert_eq!(covers.len(), 2);
        assert!(covers.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn magic_square_breaks_one_couple_at_most() {
        let cat = EigenCatalog::build(2).unwrap();
        let scheme = CouplingScheme::alphabetical(2).unwrap();
        for bits in 0..16u32 {
            let data: Vec<bool> = (0..4).map(|j| bits >> j & 1 == 1).collect();
            let best = exact_covers(&cat, usize::MAX)
                .unwrap()
                .iter()
                .map(|c| assign_cover(&cat, &scheme, &data, c).unwrap())
                .min_by_key(|a| a.violations)
                .unwrap();
            assert!(best.violations <= 1);
            let target = cover_target(&cat, &scheme, &data, &best.states).unwrap();
            assert_eq!(target.decode(&scheme), data);
            let mut tally = Tally::new(&cat, &target);
            for &i in &best.states {
                tally.add(i, 1);
            }
            assert_eq!(tally.matched(), 9 - best.violations);
        }
    }

    #[test]
    fn extension_adds_distinct_states() {
        let cat = EigenCatalog::build(2).unwrap();
        let scheme = CouplingScheme::alphabetical(2).unwrap();
        let data = [false, true, true, false];
        let cover = &exact_covers(&cat, 1).unwrap()[0];
        let a = assign_cover(&cat, &scheme, &data, cover).unwrap();
        let target = cover_target(&cat, &scheme, &data, &a.states).unwrap();
        let grown = extend_selection(&cat, &target, &a.states, 5);
        assert_eq!(grown.len(), 5);
        let mut sorted = grown.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 5);
    }
}
