//! Stage two: choose a small set of eigenstates whose mixture prefers the
//! target signs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::pauli::PauliWord;
use crate::stabilizer::{
    sampling_requirement_metric, selection_stats, CircuitParams, StabilizerState,
    DEFAULT_METRIC_CAP,
};

use super::catalog::EigenCatalog;
use super::coupling::ParityConfiguration;

/// Knobs of the selection search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectOptions {
    /// Number of worst observables left out of the cost.
    pub tolerance: usize,
    /// Exact selection size; `None` lets the size float.
    pub size: Option<usize>,
    /// Moves per restart.
    pub iterations: u64,
    /// Independent restarts, run in parallel.
    pub restarts: u64,
    /// Chance per move of a branch that skips the cost test.
    pub branch_probability: f64,
    /// Unconditional moves taken by a branch.
    pub branch_depth: usize,
    /// Cap of the per-observable shot metric.
    pub metric_cap: f64,
    pub seed: u64,
    /// Keep a per-move log of the search (first restart only).
    pub audit: bool,
}

impl Default for SelectOptions {
    fn default() -> Self {
        SelectOptions {
            tolerance: 0,
            size: None,
            iterations: 20_000,
            restarts: 8,
            branch_probability: 0.05,
            branch_depth: 3,
            metric_cap: DEFAULT_METRIC_CAP,
            seed: 0,
            audit: false,
        }
    }
}

/// One logged search move.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AuditEntry {
    pub step: u64,
    pub cost_before: f64,
    pub cost_after: f64,
    pub branch: bool,
    pub accepted: bool,
}

/// A chosen eigenstate.
#[derive(Clone, Debug)]
pub struct SelectedState {
    pub id: u64,
    pub params: CircuitParams,
    pub state: StabilizerState,
}

/// Per-observable outcome of a selection against its target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableReport {
    pub observable: String,
    pub target: i8,
    pub plus: usize,
    pub minus: usize,
    pub unbiased: usize,
    /// Single-shot probability of the target sign.
    pub p_target: f64,
    pub matched: bool,
    pub wildcard: bool,
}

/// Encoding quality of a selection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub n_states: usize,
    /// Coupled observables whose majority equals the target.
    pub matched_coupled: usize,
    pub coupled_total: usize,
    /// Whether the uncoupled observable has any strict preference.
    pub wildcard_resolved: bool,
    /// Fraction over all observables, the uncoupled one counting as matched
    /// when it has a preference.
    pub f_e: f64,
    /// Fraction over coupled observables only.
    pub f_e_coupled: f64,
    /// `N_s` times the mean capped shot metric over coupled observables,
    /// without dropping any.
    pub cost: f64,
    pub observables: Vec<ObservableReport>,
}

impl SelectionReport {
    /// Numerator of `f_e` over all `3^n` observables.
    pub fn matched_all(&self) -> usize {
        self.matched_coupled + self.wildcard_resolved as usize
    }

    pub fn total(&self) -> usize {
        self.coupled_total + 1
    }

    /// Computes the report from the states themselves.
    pub fn compute(
        states: &[StabilizerState],
        target: &ParityConfiguration,
        metric_cap: f64,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(usage("empty selection"));
        }
        let n = states[0].qubits();
        let mut observables = Vec::new();
        let (mut matched, mut coupled, mut resolved) = (0, 0, false);
        let mut metric_sum = 0.0;
        for (o, word) in PauliWord::all(n)?.enumerate() {
            let stats = selection_stats(states, &word)?;
            let t = target.sign(o);
            let p = stats.p_toward(t);
            let wildcard = o == target.wildcard();
            let hit = p > 0.5;
            if wildcard {
                resolved = stats.plus != stats.minus;
            } else {
                coupled += 1;
                matched += hit as usize;
                metric_sum += sampling_requirement_metric(p, metric_cap);
            }
            observables.push(ObservableReport {
                observable: word.to_string(),
                target: t,
                plus: stats.plus,
                minus: stats.minus,
                unbiased: stats.unbiased,
                p_target: p,
                matched: if wildcard { resolved } else { hit },
                wildcard,
            });
        }
        let total = coupled + 1;
        Ok(SelectionReport {
            n_states: states.len(),
            matched_coupled: matched,
            coupled_total: coupled,
            wildcard_resolved: resolved,
            f_e: (matched + resolved as usize) as f64 / total as f64,
            f_e_coupled: matched as f64 / coupled as f64,
            cost: states.len() as f64 * metric_sum / coupled as f64,
            observables,
        })
    }
}

/// The encoded artifact.
#[derive(Clone, Debug)]
pub struct StateSelection {
    pub states: Vec<SelectedState>,
    pub target: ParityConfiguration,
    pub report: SelectionReport,
    /// Cost with the tolerance applied, as minimized by the search.
    pub search_cost: f64,
    pub audit: Vec<AuditEntry>,
}

impl StateSelection {
    pub fn stabilizer_states(&self) -> Vec<StabilizerState> {
        self.states.iter().map(|s| s.state.clone()).collect()
    }
}

/// Best-matching eigenstates of every context (ties kept), as catalog
/// positions in ascending order.
pub fn eligible_pool(catalog: &EigenCatalog, target: &ParityConfiguration) -> Vec<usize> {
    let mut pool = Vec::new();
    for c in 0..catalog.contexts().len() {
        let members = catalog.context_states(c);
        let score = |&i: &usize| {
            catalog.states()[i]
                .eigenvalues
                .iter()
                .filter(|&&(o, v)| o as usize != target.wildcard() && target.sign(o as usize) == v)
                .count()
        };
        let best = members.iter().map(score).max().unwrap_or(0);
        pool.extend(members.iter().filter(|i| score(i) == best));
    }
    pool.sort_unstable();
    pool
}

/// Selection cost evaluated from per-observable sign counts.
struct CostModel<'a> {
    catalog: &'a EigenCatalog,
    target: &'a ParityConfiguration,
    tolerance: usize,
    cap: f64,
    toward: Vec<i32>,
    against: Vec<i32>,
    scratch: Vec<f64>,
}

impl<'a> CostModel<'a> {
    fn new(catalog: &'a EigenCatalog, target: &'a ParityConfiguration, opts: &SelectOptions) -> Self {
        let total = target.signs().len();
        CostModel {
            catalog,
            target,
            tolerance: opts.tolerance,
            cap: opts.metric_cap,
            toward: vec![0; total],
            against: vec![0; total],
            scratch: Vec::with_capacity(total),
        }
    }

    fn toggle(&mut self, state: usize, add: bool) {
        let delta = if add { 1 } else { -1 };
        for &(o, v) in &self.catalog.states()[state].eigenvalues {
            let o = o as usize;
            if v == self.target.sign(o) {
                self.toward[o] += delta;
            } else {
                self.against[o] += delta;
            }
        }
    }

    fn cost(&mut self, size: usize) -> f64 {
        if size == 0 {
            return f64::INFINITY;
        }
        let n = size as f64;
        self.scratch.clear();
        for o in 0..self.toward.len() {
            if o == self.target.wildcard() {
                continue;
            }
            let unbiased = n - (self.toward[o] + self.against[o]) as f64;
            let p = (self.toward[o] as f64 + unbiased / 2.0) / n;
            self.scratch.push(sampling_requirement_metric(p, self.cap));
        }
        let keep = self.scratch.len().saturating_sub(self.tolerance).max(1);
        if keep < self.scratch.len() {
            self.scratch
                .select_nth_unstable_by(keep - 1, |a, b| a.total_cmp(b));
        }
        let sum: f64 = self.scratch[..keep].iter().sum();
        n * sum / keep as f64
    }
}

struct Outcome {
    chosen: Vec<usize>,
    cost: f64,
    audit: Vec<AuditEntry>,
}

fn run_restart(
    catalog: &EigenCatalog,
    target: &ParityConfiguration,
    pool: &[usize],
    opts: &SelectOptions,
    restart: u64,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart);
    let mut model = CostModel::new(catalog, target, opts);
    let mut included = vec![false; pool.len()];
    let initial = opts
        .size
        .unwrap_or_else(|| rng.gen_range(1..=pool.len().min(16)))
        .min(pool.len());
    for i in rand::seq::index::sample(&mut rng, pool.len(), initial) {
        included[i] = true;
        model.toggle(pool[i], true);
    }
    let mut size = initial;
    let mut cost = model.cost(size);
    let mut best = (cost, included.clone());
    let mut audit = Vec::new();
    let logging = opts.audit && restart == 0;

    // Applies a random move and returns how to undo it.
    let random_move = |rng: &mut ChaCha8Rng,
                       included: &mut Vec<bool>,
                       model: &mut CostModel,
                       size: &mut usize|
     -> Vec<usize> {
        let flip = |i: usize, included: &mut Vec<bool>, model: &mut CostModel, size: &mut usize| {
            included[i] = !included[i];
            model.toggle(pool[i], included[i]);
            if included[i] {
                *size += 1;
            } else {
                *size -= 1;
            }
        };
        let swap = opts.size.is_some() || rng.gen_bool(0.5);
        if swap && *size > 0 && *size < pool.len() {
            let inside: Vec<usize> = (0..pool.len()).filter(|&i| included[i]).collect();
            let outside: Vec<usize> = (0..pool.len()).filter(|&i| !included[i]).collect();
            let a = inside[rng.gen_range(0..inside.len())];
            let b = outside[rng.gen_range(0..outside.len())];
            flip(a, included, model, size);
            flip(b, included, model, size);
            vec![a, b]
        } else if opts.size.is_none() {
            let mut i = rng.gen_range(0..pool.len());
            if *size == 1 && included[i] {
                i = (0..pool.len()).find(|&j| !included[j]).unwrap_or(i);
            }
            flip(i, included, model, size);
            vec![i]
        } else {
            Vec::new()
        }
    };

    let mut step = 0;
    while step < opts.iterations {
        if rng.gen_bool(opts.branch_probability) {
            let before = cost;
            for _ in 0..opts.branch_depth {
                random_move(&mut rng, &mut included, &mut model, &mut size);
                step += 1;
            }
            cost = model.cost(size);
            if logging {
                audit.push(AuditEntry {
                    step,
                    cost_before: before,
                    cost_after: cost,
                    branch: true,
                    accepted: true,
                });
            }
        } else {
            let before = cost;
            let undo = random_move(&mut rng, &mut included, &mut model, &mut size);
            step += 1;
            let after = model.cost(size);
            let accepted = after < before;
            if accepted {
                cost = after;
            } else {
                for &i in undo.iter().rev() {
                    included[i] = !included[i];
                    model.toggle(pool[i], included[i]);
                    if included[i] {
                        size += 1;
                    } else {
                        size -= 1;
                    }
                }
            }
            if logging {
                audit.push(AuditEntry {
                    step,
                    cost_before: before,
                    cost_after: if accepted { after } else { before },
                    branch: false,
                    accepted,
                });
            }
        }
        if cost < best.0 {
            best = (cost, included.clone());
        }
    }
    Outcome {
        chosen: (0..pool.len()).filter(|&i| best.1[i]).map(|i| pool[i]).collect(),
        cost: best.0,
        audit,
    }
}

/// Searches eligible-pool subsets for the lowest tolerance-adjusted cost.
pub fn select_states(
    catalog: &EigenCatalog,
    target: &ParityConfiguration,
    opts: &SelectOptions,
) -> Result<StateSelection> {
    if target.signs().len() != crate::pauli::word_count(catalog.qubits())? as usize {
        return Err(usage("target size does not match the catalog"));
    }
    if !(0.0..=1.0).contains(&opts.branch_probability) {
        return Err(usage("branch probability must lie in [0, 1]"));
    }
    if opts.restarts == 0 {
        return Err(usage("at least one restart is required"));
    }
    let pool = eligible_pool(catalog, target);
    if pool.is_empty() {
        return Err(usage("empty eligible pool"));
    }
    if let Some(size) = opts.size {
        if size == 0 || size > pool.len() {
            return Err(usage(format!(
                "selection size {size} outside 1..={}",
                pool.len()
            )));
        }
    }
    let outcomes: Vec<Outcome> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| run_restart(catalog, target, &pool, opts, r))
        .collect();
    let mut audit = Vec::new();
    let mut best: Option<Outcome> = None;
    for (r, o) in outcomes.into_iter().enumerate() {
        if r == 0 {
            audit = o.audit.clone();
        }
        if best.as_ref().is_none_or(|b| o.cost < b.cost) {
            best = Some(o);
        }
    }
    let best = best.expect("at least one restart");
    let states: Vec<SelectedState> = best
        .chosen
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
    let plain: Vec<StabilizerState> = states.iter().map(|s| s.state.clone()).collect();
    let report = SelectionReport::compute(&plain, target, opts.metric_cap)?;
    Ok(StateSelection {
        states,
        target: target.clone(),
        report,
        search_cost: best.cost,
        audit,
    })
}
