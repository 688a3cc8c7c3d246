//! Classical comparison algorithms.
//!
//! Both baselines take a [`KMeansConfig`]; defaults (10 restarts, 300
//! iterations, k-means++ seeding) follow scikit-learn's `KMeans`.

mod balanced;
mod hungarian;
mod kmeans;

use serde::{Deserialize, Serialize};

use crate::dataspace::Dataset;
use crate::error::{Error, Result};
use crate::qubo::sq_dist;
use crate::rng::Rng;

pub use balanced::{balanced_assignment, balanced_from, balanced_kmeans, slot_sizes};
pub use hungarian::min_cost_assignment;
pub use kmeans::{kmeans, lloyd_from, LloydOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    KMeansPlusPlus,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub n_restarts: usize,
    pub max_iterations: usize,
    /// Convergence threshold on the summed squared centroid shift.
    pub tolerance: f64,
    pub seed: u64,
    pub init: Init,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            n_restarts: 10,
            max_iterations: 300,
            tolerance: 1e-4,
            seed: 0,
            init: Init::KMeansPlusPlus,
        }
    }
}

impl KMeansConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self, ds: &Dataset, k: usize) -> Result<()> {
        if k == 0 || k > ds.len() {
            return Err(Error::param(format!(
                "k={k} must satisfy 1 <= k <= N={}",
                ds.len()
            )));
        }
        if self.n_restarts == 0 || self.max_iterations == 0 {
            return Err(Error::param(
                "n_restarts and max_iterations must be positive",
            ));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::param("tolerance must be non-negative"));
        }
        Ok(())
    }
}

pub(crate) fn initial_centroids(
    ds: &Dataset,
    k: usize,
    init: Init,
    rng: &mut Rng,
) -> Vec<Vec<f64>> {
    use rand::seq::index::sample;
    use rand::Rng as _;

    match init {
        Init::Random => sample(rng, ds.len(), k)
            .into_iter()
            .map(|i| ds.point(i).to_vec())
            .collect(),
        Init::KMeansPlusPlus => {
            let n = ds.len();
            let first = rng.random_range(0..n);
            let mut centroids = vec![ds.point(first).to_vec()];
            let mut nearest: Vec<f64> = ds.points().map(|p| sq_dist(p, &centroids[0])).collect();
            while centroids.len() < k {
                let total: f64 = nearest.iter().sum();
                let next = if total > 0.0 {
                    let mut target = rng.random::<f64>() * total;
                    let mut pick = n - 1;
                    for (i, &d) in nearest.iter().enumerate() {
                        if target < d {
                            pick = i;
                            break;
                        }
                        target -= d;
                    }
                    pick
                } else {
                    rng.random_range(0..n)
                };
                let c = ds.point(next).to_vec();
                for (d, p) in nearest.iter_mut().zip(ds.points()) {
                    *d = d.min(sq_dist(p, &c));
                }
                centroids.push(c);
            }
            centroids
        }
    }
}

pub(crate) fn nearest_centroid(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    centroids
        .iter()
        .enumerate()
        .map(|(c, mu)| (c, sq_dist(p, mu)))
        .fold((0, f64::INFINITY), |best, cand| {
            if cand.1 < best.1 {
                cand
            } else {
                best
            }
        })
}

pub(crate) fn means(ds: &Dataset, labels: &[usize], k: usize) -> Vec<Option<Vec<f64>>> {
    let mut sums = vec![vec![0.0; ds.dim()]; k];
    let mut counts = vec![0usize; k];
    for (p, &c) in ds.points().zip(labels) {
        sums[c].iter_mut().zip(p).for_each(|(s, v)| *s += v);
        counts[c] += 1;
    }
    sums.into_iter()
        .zip(counts)
        .map(|(s, n)| (n > 0).then(|| s.into_iter().map(|v| v / n as f64).collect()))
        .collect()
}
