//! Table of every distinct context eigenstate and its eigenvalues.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::stabilizer::{CircuitParams, StabilizerState};

/// Largest register for which the eigenstate table is built.
pub const MAX_TABLE_QUBITS: usize = 6;

/// One context eigenstate.
#[derive(Clone, Debug)]
pub struct Eigenstate {
    /// Smallest parameter id producing this state.
    pub id: u64,
    pub params: CircuitParams,
    pub state: StabilizerState,
    /// Index of the state's context in [`EigenCatalog::contexts`].
    pub context: usize,
    /// `(observable index, eigenvalue)` over the context, ascending.
    pub eigenvalues: Vec<(u32, i8)>,
}

/// Distinct eigenstates reachable by the preparation circuit, grouped by
/// context.
#[derive(Clone, Debug)]
pub struct EigenCatalog {
    n: usize,
    states: Vec<Eigenstate>,
    /// Member observable indices of each distinct context.
    contexts: Vec<Vec<u32>>,
    /// Positions in `states` of each context's eigenstates.
    by_context: Vec<Vec<usize>>,
    /// Positions in `states` of the eigenstates deterministic on each
    /// observable.
    by_observable: Vec<Vec<usize>>,
}

impl EigenCatalog {
    pub fn build(n: usize) -> Result<Self> {
        if n > MAX_TABLE_QUBITS {
            return Err(Error::Resource(format!(
                "eigenstate table is limited to n <= {MAX_TABLE_QUBITS} (got {n})"
            )));
        }
        if n == 0 || n % 2 == 1 {
            return Err(Error::Unsupported(format!(
                "eigenstate table needs even n >= 2 (got {n})"
            )));
        }
        let built: Vec<(CircuitParams, StabilizerState, Vec<(u32, i8)>)> =
            CircuitParams::all(n)
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|params| {
                    let state = StabilizerState::build(&params)?;
                    let context = params.context()?;
                    let eigenvalues = context
                        .members()
                        .iter()
                        .map(|w| Ok((w.index() as u32, state.expectation(w)?.value())))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((params, state, eigenvalues))
                })
                .collect::<Result<_>>()?;

        let mut states = Vec::new();
        let mut seen = HashSet::new();
        let mut contexts: Vec<Vec<u32>> = Vec::new();
        let mut context_ids: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut by_context: Vec<Vec<usize>> = Vec::new();
        // Parameters come in id order, so the first occurrence has the
        // smallest id.
        for (params, state, eigenvalues) in built {
            if !seen.insert(state.clone()) {
                continue;
            }
            let members: Vec<u32> = eigenvalues.iter().map(|&(o, _)| o).collect();
            let next = contexts.len();
            let context = *context_ids.entry(members.clone()).or_insert(next);
            if context == next {
                contexts.push(members);
                by_context.push(Vec::new());
            }
            by_context[context].push(states.len());
            states.push(Eigenstate {
                id: params.id(),
                params,
                state,
                context,
                eigenvalues,
            });
        }
        let total = crate::pauli::word_count(n)? as usize;
        let mut by_observable = vec![Vec::new(); total];
        for (i, s) in states.iter().enumerate() {
            for &(o, _) in &s.eigenvalues {
                by_observable[o as usize].push(i);
            }
        }
        Ok(EigenCatalog {
            n,
            states,
            contexts,
            by_context,
            by_observable,
        })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> &[Eigenstate] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contexts(&self) -> &[Vec<u32>] {
        &self.contexts
    }

    pub fn context_states(&self, context: usize) -> &[usize] {
        &self.by_context[context]
    }

    pub fn observable_states(&self, obs: usize) -> &[usize] {
        &self.by_observable[obs]
    }

    /// Looks a state up by its smallest parameter id.
    pub fn by_id(&self, id: u64) -> Option<&Eigenstate> {
        self.states.iter().find(|s| s.id == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_table() {
        let cat = EigenCatalog::build(2).unwrap();
        assert_eq!(cat.len(), 24);
        assert_eq!(cat.contexts().len(), 6);
        assert!(cat.contexts().iter().enumerate().all(|(c, _)| cat.context_states(c).len() == 4));
        assert!((0..9).all(|o| cat.observable_states(o).len() == 8));
    }

    #[test]
    fn rejects_odd_and_large() {
        assert!(matches!(EigenCatalog::build(3), Err(Error::Unsupported(_))));
        assert!(matches!(EigenCatalog::build(8), Err(Error::Resource(_))));
    }
}
