//! Closed-form performance of the code as the register grows.

pub mod amplify;
pub mod application;
pub mod compare;
pub mod optimum;
pub mod tables;
pub mod tolerance;

pub use amplify::{amplify, normal_constant, repetitions_for, repetitions_normal};
pub use application::{application_report, data_bits_exact, PerformanceReport};
pub use compare::{
    crossovers, mub_bit_success, mub_table, qrac_bounds, rac_exact, rac_normal, Crossovers, MubRow,
};
pub use optimum::{epsilon_star, sampling_objective, ToleranceOptimum};
pub use tolerance::{
    asymptotic_cost, context_fraction, expected_success, g, g_entropy, majority_success,
    retrieval_cost, selection_size, RetrievalCost, SuccessEstimate, TieRule,
};

/// Amplified success used throughout the asymptotic accounting.
pub const DEFAULT_TARGET: f64 = 0.999;

/// Smallest register size at which the bit success has settled.
pub const ASYMPTOTIC_N: usize = 16;
