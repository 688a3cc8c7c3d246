use std::fmt;

use qbkm_core::baselines::{balanced_kmeans, kmeans, KMeansConfig};
use qbkm_core::dataspace::Dataset;
use qbkm_core::qubo::ClusterAssignment;
use qbkm_core::report::RunReport;
use qbkm_core::solvers::{cluster_qubo, AnnealConfig, QuboBackend};
use serde::{Deserialize, Serialize};

#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    Hash,
    PartialOrd,
    Ord,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Kmeans,
    Balanced,
    QuboExact,
    QuboAnneal,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Kmeans,
        Method::Balanced,
        Method::QuboExact,
        Method::QuboAnneal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Kmeans => "kmeans",
            Method::Balanced => "balanced",
            Method::QuboExact => "qubo-exact",
            Method::QuboAnneal => "qubo-anneal",
        }
    }

    pub fn is_qubo(self) -> bool {
        matches!(self, Method::QuboExact | Method::QuboAnneal)
    }

    /// Cluster `ds` into `k` groups with default settings and the given seed.
    pub fn run(
        self,
        ds: &Dataset,
        k: usize,
        seed: u64,
    ) -> qbkm_core::Result<(ClusterAssignment, RunReport)> {
        match self {
            Method::Kmeans => kmeans(ds, k, &KMeansConfig::with_seed(seed)),
            Method::Balanced => balanced_kmeans(ds, k, &KMeansConfig::with_seed(seed)),
            Method::QuboExact => cluster_qubo(ds, k, &QuboBackend::Exact),
            Method::QuboAnneal => {
                cluster_qubo(ds, k, &QuboBackend::Anneal(AnnealConfig::with_seed(seed)))
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
