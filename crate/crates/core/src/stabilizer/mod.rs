//! Context eigenstates: preparation circuits, a stabilizer-tableau
//! simulator, a dense statevector cross-check and mixed-selection statistics.

pub mod circuit;
pub mod dense;
pub mod state;
pub mod stats;
pub mod sweep;

pub use circuit::{emit_qasm, readout_beta, CircuitParams, Gate};
pub use state::{StabilizerState, Verdict};
pub use stats::{
    normal_prefactor, sampling_requirement_exact, sampling_requirement_metric, selection_stats,
    MajorityStats, ShotTable, DEFAULT_METRIC_CAP,
};
