pub mod analysis;
pub mod context;
pub mod encoder;
pub mod error;
pub mod pauli;
pub mod retrieval;
pub mod stabilizer;

pub use error::{Error, Result};
