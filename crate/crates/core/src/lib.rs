//! Balanced k-means clustering formulated as a quadratic unconstrained binary
//! optimization (QUBO) problem.
//!
//! The crate is split along the experiment pipeline:
//!
//! - [`dataspace`]: synthetic hypercube-Gaussian data, the bundled Iris set,
//!   balanced subsetting and CSV I/O.
//! - [`qubo`]: distance matrix, penalty weights, assembly of the `Nk x Nk`
//!   QUBO matrix, energies, objectives and decoding of binary solutions.
//! - [`solvers`]: exhaustive and branch-and-bound exact minimizers, a
//!   simulated annealer, and the end-to-end [`solvers::cluster_qubo`] pipeline.
//! - [`baselines`]: Lloyd's k-means and assignment-based balanced k-means.
//! - [`metrics`]: contingency tables, adjusted rand index and the annealer
//!   timing model.

pub mod baselines;
pub mod dataspace;
pub mod error;
pub mod metrics;
pub mod qubo;
pub mod report;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
