//! Multi-trial clustering-quality experiments on synthetic data and Iris
//! subsets.

use qbkm_core::dataspace::{
    generate_synthetic, load_iris, subset_balanced, Dataset, SyntheticSpec,
};
use qbkm_core::rng::derive_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::method::Method;
use crate::parse::ProblemSize;
use crate::stats::Summary;

/// The nine `(N, k)` problem types of the synthetic comparison.
pub const SYNTH_SIZES: [ProblemSize; 9] = [
    ProblemSize::new(16, 2),
    ProblemSize::new(24, 2),
    ProblemSize::new(32, 2),
    ProblemSize::new(12, 3),
    ProblemSize::new(15, 3),
    ProblemSize::new(21, 3),
    ProblemSize::new(8, 4),
    ProblemSize::new(12, 4),
    ProblemSize::new(16, 4),
];

/// Iris has three classes, so only the `k <= 3` problem types apply.
pub const IRIS_SIZES: [ProblemSize; 6] = [
    ProblemSize::new(16, 2),
    ProblemSize::new(24, 2),
    ProblemSize::new(32, 2),
    ProblemSize::new(12, 3),
    ProblemSize::new(15, 3),
    ProblemSize::new(21, 3),
];

pub const DEFAULT_METHODS: [Method; 3] = [Method::Kmeans, Method::Balanced, Method::QuboAnneal];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DataSource {
    Synthetic {
        dim: usize,
        side_length: f64,
        std_dev: f64,
    },
    Iris,
}

impl DataSource {
    pub fn synthetic_default() -> Self {
        DataSource::Synthetic {
            dim: 2,
            side_length: 2.0,
            std_dev: 1.0,
        }
    }

    fn experiment_name(&self) -> &'static str {
        match self {
            DataSource::Synthetic { .. } => "synth-ari",
            DataSource::Iris => "iris-ari",
        }
    }

    fn dataset(
        &self,
        iris: Option<&Dataset>,
        size: ProblemSize,
        seed: u64,
    ) -> qbkm_core::Result<Dataset> {
        match *self {
            DataSource::Synthetic {
                dim,
                side_length,
                std_dev,
            } => generate_synthetic(
                &SyntheticSpec::new(size.n, size.k, dim, seed)
                    .with_side_length(side_length)
                    .with_std_dev(std_dev),
            ),
            DataSource::Iris => subset_balanced(iris.expect("iris loaded"), size.n, size.k, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AriSpec {
    pub source: DataSource,
    pub sizes: Vec<ProblemSize>,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub seed: u64,
}

impl AriSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(BenchError::usage("--trials must be at least 1"));
        }
        if self.sizes.is_empty() {
            return Err(BenchError::usage("at least one problem size is required"));
        }
        if self.methods.is_empty() {
            return Err(BenchError::usage("at least one method is required"));
        }
        let mut sizes = self.sizes.clone();
        sizes.sort();
        sizes.dedup();
        if sizes.len() != self.sizes.len() {
            return Err(BenchError::usage("problem sizes must be distinct"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AriRow {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    pub ari: Summary,
    /// Trials that returned an error and were skipped.
    pub failed: usize,
    /// First error message, if any trial failed.
    pub first_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AriTable {
    pub experiment: String,
    pub spec: AriSpec,
    pub rows: Vec<AriRow>,
}

/// Seeds of trial `trial` at problem type `size`: `(data, method)`.
pub fn trial_seeds(seed: u64, size: ProblemSize, trial: usize) -> (u64, u64) {
    let base = derive_seed(seed, &[trial as u64, size.n as u64, size.k as u64]);
    (derive_seed(base, &[0]), derive_seed(base, &[1]))
}

/// Run every method on `trials` seeded datasets per problem type. Rows are
/// ordered by size, then by method as listed. Output depends only on the spec.
pub fn run_ari(spec: &AriSpec) -> Result<AriTable> {
    spec.validate()?;
    let iris = matches!(spec.source, DataSource::Iris).then(load_iris);
    let mut rows = Vec::with_capacity(spec.sizes.len() * spec.methods.len());
    for &size in &spec.sizes {
        // outcomes[trial][method]
        let outcomes: Vec<Vec<std::result::Result<f64, String>>> = (0..spec.trials)
            .into_par_iter()
            .map(|trial| {
                let (data_seed, method_seed) = trial_seeds(spec.seed, size, trial);
                match spec.source.dataset(iris.as_ref(), size, data_seed) {
                    Ok(ds) => spec
                        .methods
                        .iter()
                        .map(|m| {
                            m.run(&ds, size.k, method_seed)
                                .map_err(|e| e.to_string())
                                .and_then(|(_, r)| {
                                    r.ari.ok_or_else(|| "dataset has no labels".to_owned())
                                })
                        })
                        .collect(),
                    Err(e) => vec![Err(e.to_string()); spec.methods.len()],
                }
            })
            .collect();
        for (mi, &method) in spec.methods.iter().enumerate() {
            let mut values = Vec::with_capacity(spec.trials);
            let mut errors = Vec::new();
            for trial in &outcomes {
                match &trial[mi] {
                    Ok(v) => values.push(*v),
                    Err(e) => errors.push(e.clone()),
                }
            }
            rows.push(AriRow {
                n: size.n,
                k: size.k,
                method,
                ari: Summary::of(&values),
                failed: errors.len(),
                first_error: errors.into_iter().next(),
            });
        }
    }
    Ok(AriTable {
        experiment: spec.source.experiment_name().to_owned(),
        spec: spec.clone(),
        rows,
    })
}
