//! Experiment harness for QUBO balanced k-means: seeded multi-trial ARI
//! comparisons, formulation-time sweeps and the plumbing behind the `qbkm`
//! binary.

pub mod ari;
pub mod error;
pub mod method;
pub mod output;
pub mod parse;
pub mod scale;
pub mod stats;

pub use error::{BenchError, Result};
pub use method::Method;
