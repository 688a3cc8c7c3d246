//! QUBO minimizers and the end-to-end QUBO clustering pipeline.
//!
//! - [`solve_exact`]: exhaustive enumeration, the reference oracle
//!   (up to [`EXACT_MAX_VARS`] variables).
//! - [`solve_branch_and_bound`]: exact grouped branch-and-bound for
//!   instances somewhat beyond enumeration range.
//! - [`solve_anneal`]: multi-read simulated annealing, keeping the
//!   lowest-energy read.

mod anneal;
mod branch;
mod exact;
mod pipeline;

use serde::{Deserialize, Serialize};

use crate::qubo::BinarySolution;

pub use anneal::{solve_anneal, AnnealConfig};
pub use branch::{contiguous_groups, solve_branch_and_bound, BRANCH_MAX_VARS};
pub use exact::{solve_exact, EXACT_MAX_VARS};
pub use pipeline::{cluster_qubo, QuboBackend};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub best: BinarySolution,
    /// One energy per annealer read; a single entry for exact solvers.
    pub read_energies: Vec<f64>,
    pub solver: String,
    /// Seconds.
    pub wall_time: f64,
}

/// Relative tolerance under which two energies count as tied.
pub(crate) fn tie_tolerance(max_abs: f64) -> f64 {
    1e-9 * max_abs.max(f64::MIN_POSITIVE)
}
