use serde::{Deserialize, Serialize};

use crate::dataspace::Dataset;
use crate::error::Result;
use crate::metrics::adjusted_rand_index;
use crate::qubo::{feasible_objective, variance_objective, ClusterAssignment, RepairStats};

/// Per-phase wall times in seconds. Estimated phases come from the
/// [`crate::metrics::TimingModel`]; `total` sums measured and estimated parts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub formulation: f64,
    pub solve: f64,
    pub postprocess: f64,
    pub estimated_embed: f64,
    pub estimated_anneal: f64,
    pub total: f64,
}

impl PhaseTimes {
    pub fn with_total(mut self) -> Self {
        self.total = self.formulation
            + self.solve
            + self.postprocess
            + self.estimated_embed
            + self.estimated_anneal;
        self
    }
}

/// Outcome of one clustering run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub method: String,
    /// Agreement with the dataset's labels, when it has any.
    pub ari: Option<f64>,
    /// Sum of squared distances to cluster centroids; `None` if a cluster is empty.
    pub variance_objective: Option<f64>,
    /// Sum over clusters of squared distances between ordered member pairs.
    pub pairwise_objective: f64,
    /// Best QUBO energy, for QUBO methods.
    pub energy: Option<f64>,
    pub times: PhaseTimes,
    pub repairs: RepairStats,
    pub cluster_sizes: Vec<usize>,
}

impl RunReport {
    pub fn new(
        method: impl Into<String>,
        ds: &Dataset,
        asg: &ClusterAssignment,
        times: PhaseTimes,
    ) -> Result<Self> {
        let ari = ds
            .labels()
            .map(|truth| adjusted_rand_index(asg.labels(), truth))
            .transpose()?;
        Ok(Self {
            method: method.into(),
            ari,
            variance_objective: variance_objective(ds, asg).ok(),
            pairwise_objective: feasible_objective(ds, asg)?,
            energy: None,
            times: times.with_total(),
            repairs: RepairStats::default(),
            cluster_sizes: asg.sizes(),
        })
    }
}
