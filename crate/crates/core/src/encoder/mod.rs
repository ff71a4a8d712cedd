//! Data -> target signs -> eigenstate selection.

pub mod catalog;
pub mod coupling;
pub mod cover;
pub mod data;
pub mod manifest;
pub mod select;
pub mod target;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::stabilizer::StabilizerState;
use crate::retrieval::plan::{noise_target, RetrievalPlan};

pub use catalog::{EigenCatalog, Eigenstate};
pub use coupling::{data_len, CouplingScheme, ParityConfiguration};
pub use manifest::Manifest;
pub use select::{
    eligible_pool, select_states, SelectOptions, SelectedState, SelectionReport, StateSelection,
};
pub use target::{optimize_target, score_target, TargetSearch};

/// How the target signs and the states are found.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Choice-bit hill climbing, then the stochastic state search.
    Search,
    /// One eigenstate per context of an exact cover, then greedy growth.
    Cover,
    /// `Cover` when an exact cover exists and fits the requested size,
    /// `Search` otherwise.
    #[default]
    Auto,
}

/// Settings of a full encoding run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodeOptions {
    #[serde(default)]
    pub strategy: Strategy,
    /// Upper bound on exact covers tried by the cover strategy.
    #[serde(default = "default_cover_limit")]
    pub cover_limit: usize,
    /// Choice-bit flips tried by the target search.
    pub target_iterations: u64,
    pub select: SelectOptions,
    pub seed: u64,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            strategy: Strategy::Auto,
            cover_limit: cover::DEFAULT_COVER_LIMIT,
            target_iterations: 2_000,
            select: SelectOptions::default(),
            seed: 0,
        }
    }
}

fn default_cover_limit() -> usize {
    cover::DEFAULT_COVER_LIMIT
}

/// Output of [`encode`].
#[derive(Clone, Debug)]
pub struct Encoding {
    pub scheme: CouplingScheme,
    pub data: Vec<bool>,
    pub target: TargetSearch,
    pub selection: StateSelection,
    pub plan: RetrievalPlan,
}

/// Retrieval schedule for a selection of `n_states` at `n` qubits with
/// encoding fidelity `f_e`.
pub fn plan_for_selection(n: usize, n_states: usize, f_e: f64) -> Result<RetrievalPlan> {
    let total = crate::pauli::word_count(n)? as f64;
    let n_o = n_states as f64 * (2f64.powi(n as i32 - 1) + 1.0) / total;
    RetrievalPlan::for_noise(n_states as f64, n_o, noise_target(f_e, total as usize))
}

/// Encodes `data`. With the search strategy the stage-two seed is derived
/// from `opts.seed`, which overrides `opts.select.seed`.
pub fn encode(
    data: &[bool],
    scheme: &CouplingScheme,
    catalog: &EigenCatalog,
    opts: &EncodeOptions,
) -> Result<Encoding> {
    if data.len() != scheme.len() {
        return Err(usage(format!(
            "data has {} bits, {} qubits store {}",
            data.len(),
            scheme.qubits(),
            scheme.len()
        )));
    }
    if catalog.qubits() != scheme.qubits() {
        return Err(usage("catalog and coupling scheme sizes differ"));
    }
    let (target, selection) = match opts.strategy {
        Strategy::Search => search_encode(data, scheme, catalog, opts)?,
        Strategy::Cover => cover_encode(data, scheme, catalog, opts)?,
        Strategy::Auto => match cover_encode(data, scheme, catalog, opts) {
            Ok(found) => found,
            Err(Error::Unsupported(_)) => search_encode(data, scheme, catalog, opts)?,
            Err(e) => return Err(e),
        },
    };
    let plan = plan_for_selection(scheme.qubits(), selection.states.len(), selection.report.f_e)?;
    Ok(Encoding {
        scheme: scheme.clone(),
        data: data.to_vec(),
        target,
        selection,
        plan,
    })
}

fn search_encode(
    data: &[bool],
    scheme: &CouplingScheme,
    catalog: &EigenCatalog,
    opts: &EncodeOptions,
) -> Result<(TargetSearch, StateSelection)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let target = optimize_target(data, scheme, catalog, opts.target_iterations, &mut rng)?;
    let mut select = opts.select.clone();
    select.seed = opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
    let selection = select_states(catalog, &target.config, &select)?;
    Ok((target, selection))
}

/// Tries every enumerated cover and keeps the selection matching the most
/// observables, then the lowest cost. Deterministic; the seed is unused.
/// Fails with `Unsupported` when no cover exists or every cover is larger
/// than the requested size.
fn cover_encode(
    data: &[bool],
    scheme: &CouplingScheme,
    catalog: &EigenCatalog,
    opts: &EncodeOptions,
) -> Result<(TargetSearch, StateSelection)> {
    let covers: Vec<Vec<usize>> = cover::exact_covers(catalog, opts.cover_limit)?
        .into_iter()
        .filter(|c| opts.select.size.is_none_or(|s| c.len() <= s))
        .collect();
    if covers.is_empty() {
        return Err(Error::Unsupported(format!(
            "no exact context cover fits at n = {}",
            scheme.qubits()
        )));
    }
    let candidates: Vec<(ParityConfiguration, Vec<usize>, SelectionReport)> = covers
        .par_iter()
        .map(|c| {
            let assigned = cover::assign_cover(catalog, scheme, data, c)?;
            let target = cover::cover_target(catalog, scheme, data, &assigned.states)?;
            let size = opts.select.size.unwrap_or(assigned.states.len());
            let chosen = cover::extend_selection(catalog, &target, &assigned.states, size);
            let plain: Vec<StabilizerState> =
                chosen.iter().map(|&i| catalog.states()[i].state.clone()).collect();
            let report = SelectionReport::compute(&plain, &target, opts.select.metric_cap)?;
            Ok((target, chosen, report))
        })
        .collect::<Result<_>>()?;
    let (target, chosen, report) = candidates
        .into_iter()
        .reduce(|best, next| {
            let better = next.2.matched_all() > best.2.matched_all()
                || (next.2.matched_all() == best.2.matched_all() && next.2.cost < best.2.cost);
            if better {
                next
            } else {
                best
            }
        })
        .expect("nonempty");
    let score = score_target(&target, catalog);
    let states = chosen
        .iter()
        .map(|&i| {
            let e = &catalog.states()[i];
            SelectedState {
                id: e.id,
                params: e.params.clone(),
                state: e.state.clone(),
            }
        })
        .collect();
    Ok((
        TargetSearch {
            config: target.clone(),
            score,
            initial_score: score,
            accepted: 0,
        },
        StateSelection {
            states,
            target,
            search_cost: report.cost,
            report,
            audit: Vec::new(),
        },
    ))
}
