//! Receiver side: filter states whose outcome changes, then take the
//! majority of the survivors.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encoder::CouplingScheme;
use crate::error::{usage, Error, Result};
use crate::pauli::{commutes, PauliWord};
use crate::stabilizer::{StabilizerState, Verdict};

/// One measurement in a retrieval run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEvent {
    /// Index of the queried observable within the query.
    pub member: usize,
    /// Step, counted from 1.
    pub step: u32,
    /// Position of the state in the selection.
    pub state: usize,
    pub outcome: i8,
    /// The outcome differed from the previous one and the state was dropped.
    pub discarded: bool,
}

/// Result of filtering one observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrievalOutcome {
    pub parity: i8,
    pub survivors: usize,
    /// State copies consumed (shared across a context query).
    pub samples_used: usize,
    /// Unbiased states among the survivors, known only to the simulator.
    pub unfiltered_unbiased: usize,
    /// The survivors split evenly and the parity is a coin flip.
    pub tie: bool,
}

/// Tracks one observable's filter over the selection.
struct Filter {
    last: Vec<Option<i8>>,
    alive: Vec<bool>,
}

impl Filter {
    fn new(n_states: usize) -> Self {
        Filter {
            last: vec![None; n_states],
            alive: vec![true; n_states],
        }
    }

    /// Records an outcome and returns whether the state was dropped.
    fn record(&mut self, state: usize, outcome: i8) -> bool {
        let dropped = self.last[state].is_some_and(|prev| prev != outcome);
        self.last[state] = Some(outcome);
        if dropped {
            self.alive[state] = false;
        }
        dropped
    }

    fn finish<R: Rng + ?Sized>(
        &self,
        verdicts: &[Verdict],
        samples_used: usize,
        rng: &mut R,
        label: &dyn Fn() -> String,
    ) -> Result<RetrievalOutcome> {
        let (mut plus, mut minus, mut unbiased) = (0usize, 0usize, 0usize);
        for (i, alive) in self.alive.iter().enumerate() {
            if !alive {
                continue;
            }
            match self.last[i] {
                Some(1) => plus += 1,
                Some(_) => minus += 1,
                None => continue,
            }
            unbiased += (verdicts[i] == Verdict::Unbiased) as usize;
        }
        let survivors = plus + minus;
        if survivors == 0 {
            return Err(Error::Unresolved(format!("every state was filtered out on {}", label())));
        }
        let tie = plus == minus;
        let parity = if tie {
            if rng.gen::<bool>() {
                1
            } else {
                -1
            }
        } else if plus > minus {
            1
        } else {
            -1
        };
        Ok(RetrievalOutcome {
            parity,
            survivors,
            samples_used,
            unfiltered_unbiased: unbiased,
            tie,
        })
    }
}

fn check_selection(states: &[StabilizerState], steps: u32) -> Result<()> {
    if states.is_empty() {
        return Err(usage("empty selection"));
    }
    if steps == 0 {
        return Err(usage("at least one step is required"));
    }
    Ok(())
}

/// Filters the selection on `obs` for `steps` steps. Each live state is
/// measured once per step on a fresh copy; a state whose outcome changes is
/// dropped. The parity is the majority of the survivors' outcomes.
pub fn retrieve_parity<R: Rng + ?Sized>(
    states: &[StabilizerState],
    obs: &PauliWord,
    steps: u32,
    rng: &mut R,
    mut transcript: Option<&mut Vec<TranscriptEvent>>,
) -> Result<RetrievalOutcome> {
    check_selection(states, steps)?;
    let verdicts = states
        .iter()
        .map(|s| s.expectation(obs))
        .collect::<Result<Vec<_>>>()?;
    let mut filter = Filter::new(states.len());
    let mut samples = 0;
    for step in 1..=steps {
        for (i, verdict) in verdicts.iter().enumerate() {
            if !filter.alive[i] {
                continue;
            }
            let outcome = match verdict {
                Verdict::Unbiased => {
                    if rng.gen::<bool>() {
                        1
                    } else {
                        -1
                    }
                }
                v => v.value(),
            };
            samples += 1;
            let discarded = filter.record(i, outcome);
            if let Some(t) = transcript.as_deref_mut() {
                t.push(TranscriptEvent {
                    member: 0,
                    step,
                    state: i,
                    outcome,
                    discarded,
                });
            }
        }
    }
    filter.finish(&verdicts, samples, rng, &|| obs.to_string())
}

/// Filters every member of a commuting set from one shared sample stream:
/// each copy of a state is measured on all members still filtering it, and
/// copies stop once every member has dropped the state.
pub fn retrieve_context<R: Rng + ?Sized>(
    states: &[StabilizerState],
    members: &[PauliWord],
    steps: u32,
    rng: &mut R,
    mut transcript: Option<&mut Vec<TranscriptEvent>>,
) -> Result<Vec<Result<RetrievalOutcome>>> {
    check_selection(states, steps)?;
    if members.is_empty() {
        return Err(usage("empty observable set"));
    }
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if !commutes(a, b)? {
                return Err(usage(format!("{a} and {b} do not commute")));
            }
        }
    }
    let verdicts: Vec<Vec<Verdict>> = members
        .iter()
        .map(|m| states.iter().map(|s| s.expectation(m)).collect())
        .collect::<Result<_>>()?;
    let mut filters: Vec<Filter> = members.iter().map(|_| Filter::new(states.len())).collect();
    let mut samples = 0;
    for step in 1..=steps {
        for (i, state) in states.iter().enumerate() {
            if filters.iter().all(|f| !f.alive[i]) {
                continue;
            }
            let mut copy = state.clone();
            samples += 1;
            for (k, member) in members.iter().enumerate() {
                if !filters[k].alive[i] {
                    continue;
                }
                let outcome = copy.measure(member, rng)?;
                let discarded = filters[k].record(i, outcome);
                if let Some(t) = transcript.as_deref_mut() {
                    t.push(TranscriptEvent {
                        member: k,
                        step,
                        state: i,
                        outcome,
                        discarded,
                    });
                }
            }
        }
    }
    Ok(filters
        .iter()
        .zip(&verdicts)
        .zip(members)
        .map(|((f, v), m)| f.finish(v, samples, rng, &|| m.to_string()))
        .collect())
}

/// One decoded data bit with the two parities behind it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitOutcome {
    pub bit: bool,
    pub first: RetrievalOutcome,
    pub second: RetrievalOutcome,
    /// Both parities came from one sample stream.
    pub shared: bool,
}

/// Reads couple `couple` of `scheme`: 0 when the two parities agree, 1 when
/// they differ. Commuting couples share a sample stream.
pub fn retrieve_bit<R: Rng + ?Sized>(
    states: &[StabilizerState],
    scheme: &CouplingScheme,
    couple: usize,
    steps: u32,
    rng: &mut R,
    mut transcript: Option<&mut Vec<TranscriptEvent>>,
) -> Result<BitOutcome> {
    if couple >= scheme.len() {
        return Err(usage(format!(
            "couple {couple} out of range (scheme has {})",
            scheme.len()
        )));
    }
    let n = scheme.qubits();
    let (a, b) = scheme.couple(couple);
    let words = [
        PauliWord::from_index(n, a as u64)?,
        PauliWord::from_index(n, b as u64)?,
    ];
    let unresolved = |e: Error| match e {
        Error::Unresolved(msg) => Error::Unresolved(format!("bit {couple}: {msg}")),
        other => other,
    };
    let shared = commutes(&words[0], &words[1])?;
    let (first, second) = if shared {
        let mut out = retrieve_context(states, &words, steps, rng, transcript)?.into_iter();
        let first = out.next().expect("two members").map_err(unresolved)?;
        let second = out.next().expect("two members").map_err(unresolved)?;
        (first, second)
    } else {
        let first = retrieve_parity(states, &words[0], steps, rng, transcript.as_deref_mut())
            .map_err(unresolved)?;
        let mut second_log = Vec::new();
        let second = retrieve_parity(
            states,
            &words[1],
            steps,
            rng,
            transcript.is_some().then_some(&mut second_log),
        )
        .map_err(unresolved)?;
        if let Some(t) = transcript {
            t.extend(second_log.into_iter().map(|e| TranscriptEvent { member: 1, ..e }));
        }
        (first, second)
    };
    Ok(BitOutcome {
        bit: first.parity != second.parity,
        first,
        second,
        shared,
    })
}

/// An independent encoding of the same data under its own coupling.
#[derive(Clone, Debug)]
pub struct Repetition {
    pub scheme: CouplingScheme,
    pub states: Vec<StabilizerState>,
}

/// Majority over repetitions for one data bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmplifiedBit {
    pub bit: bool,
    pub ones: usize,
    pub zeros: usize,
    /// Repetitions whose parities could not be resolved.
    pub unresolved: usize,
}

/// Reads data bit `bit` from every repetition and takes the majority.
/// Unresolved repetitions abstain; an even split is itself unresolved.
pub fn amplified_retrieve<R: Rng + ?Sized>(
    repetitions: &[Repetition],
    bit: usize,
    steps: u32,
    rng: &mut R,
) -> Result<AmplifiedBit> {
    if repetitions.len().is_multiple_of(2) {
        return Err(usage(format!(
            "repetition count must be odd (got {})",
            repetitions.len()
        )));
    }
    let (mut ones, mut zeros, mut unresolved) = (0, 0, 0);
    for rep in repetitions {
        match retrieve_bit(&rep.states, &rep.scheme, bit, steps, rng, None) {
            Ok(out) if out.bit => ones += 1,
            Ok(_) => zeros += 1,
            Err(Error::Unresolved(_)) => unresolved += 1,
            Err(e) => return Err(e),
        }
    }
    if ones == zeros {
        return Err(Error::Unresolved(format!(
            "bit {bit}: repetitions split {ones}-{zeros}"
        )));
    }
    Ok(AmplifiedBit {
        bit: ones > zeros,
        ones,
        zeros,
        unresolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::CircuitParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn word(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    fn bell() -> StabilizerState {
        StabilizerState::build(&CircuitParams::zero(2).unwrap()).unwrap()
    }

    #[test]
    fn deterministic_states_always_survive() {
        let states = vec![bell(); 4];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = retrieve_parity(&states, &word("XX"), 5, &mut rng, None).unwrap();
        assert_eq!(out.survivors, 4);
        assert_eq!(out.samples_used, 20);
        assert_eq!(out.parity, 1);
        assert!(!out.tie);
    }

    #[test]
    fn all_unbiased_can_be_unresolved() {
        let states = vec![bell(); 3];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut unresolved = 0;
        for _ in 0..200 {
            match retrieve_parity(&states, &word("XZ"), 6, &mut rng, None) {
                Err(Error::Unresolved(_)) => unresolved += 1,
                Ok(o) => assert_eq!(o.unfiltered_unbiased, o.survivors),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(unresolved > 150);
    }

    #[test]
    fn context_query_shares_copies() {
        let states = vec![bell(); 3];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let members = [word("XX"), word("YY"), word("ZZ")];
        let mut log = Vec::new();
        let out = retrieve_context(&states, &members, 4, &mut rng, Some(&mut log)).unwrap();
        let parities: Vec<i8> = out.iter().map(|o| o.as_ref().unwrap().parity).collect();
        assert_eq!(parities, [1, -1, 1]);
        assert!(out.iter().all(|o| o.as_ref().unwrap().samples_used == 12));
        assert_eq!(log.len(), 36);
    }

    #[test]
    fn non_commuting_context_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let err = retrieve_context(&[bell()], &[word("XX"), word("XZ")], 2, &mut rng, None);
        assert!(matches!(err, Err(Error::Usage(_))));
    }

    #[test]
    fn even_repetitions_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rep = Repetition {
            scheme: CouplingScheme::alphabetical(2).unwrap(),
            states: vec![bell()],
        };
        let err = amplified_retrieve(&[rep.clone(), rep], 0, 3, &mut rng);
        assert!(matches!(err, Err(Error::Usage(_))));
    }
}
