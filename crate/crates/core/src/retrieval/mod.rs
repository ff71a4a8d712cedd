//! Bob's side of the protocol.

pub mod plan;
pub mod protocol;

pub use plan::RetrievalPlan;
pub use protocol::{
    amplified_retrieve, retrieve_bit, retrieve_context, retrieve_parity, AmplifiedBit, BitOutcome,
    Repetition, RetrievalOutcome, TranscriptEvent,
};
